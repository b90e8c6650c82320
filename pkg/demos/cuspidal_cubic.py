# coding: utf-8

# # The cuspidal cubic and its pencil
#
# We load the curve Z*Y^2 = X^3 from the catalog, look at the contact orders
# of small-degree forms along the branch (t^2, t^3), and build the pencil and
# net of cubics that meet the curve only at the cusp.

# In[1]:

from cusppencil import catalog
from cusppencil.linear_systems import HomogeneousForm

curve, profile = catalog.get("cusp3").load()
print(curve.F, profile.multiplicities)


# Contact orders are t-orders of a form along the parametrization. The curve
# itself vanishes identically, so only a lower bound is available.

# In[2]:

for e in [(1, 0, 0), (0, 1, 0), (0, 0, 1)]:
    G = HomogeneousForm.monomial(e)
    print(G, curve.contact_order(G))
print(curve.F, curve.contact_order(curve.F))


# The semigroup of the branch up to 9, and the dimension of the space of
# cubics with contact at least j:

# In[3]:

print(curve.semigroup_window())
for j in range(10):
    print(j, curve.dim_X(3, j))


# j = 9 leaves a pencil, j = 8 a net.

# In[4]:

print([str(f) for f in curve.pencil_basis()])
net = curve.net_basis()
print([str(f) for f in net])


# The rational map given by the net has one point in a generic fibre.

# In[5]:

from cusppencil.linear_systems import map_degree_probe

print(map_degree_probe(net, trials=5, seed=1))
