# coding: utf-8

# # Resolving the base point of the pencil
#
# For every numerically admissible profile of a rational unicuspidal curve of
# degree at most 10 we blow up the base point of the pencil until it is free,
# and read off the curves that dominate the base of the resulting fibration.

# In[1]:

from cusppencil.cusp_numerics import admissible_profiles, nu_tilde
from cusppencil.pencil_resolution import dicriticals, dual_graph, plan, resolve_report

profiles = admissible_profiles(10)
len(profiles)


# The cubic needs six blow-ups. Only the last exceptional curve meets the
# strict transform of the curve, and it does so once, so it is a section.

# In[2]:

cubic = profiles[2]
report = resolve_report(cubic)
for key in ("m", "full_seq", "weights", "edges", "C_intersections", "dicriticals"):
    print(key, report[key])


# Some profiles have two horizontal curves. At least one of them has degree one.

# In[3]:

for prof in profiles:
    rep = dicriticals(plan(prof))
    if rep.count == 2:
        print(prof.degree, prof.multiplicities, rep.indices, [rep.degrees[i] for i in rep.indices])


# In those cases the curve meets two exceptional curves that are themselves
# adjacent, so the graph including the curve has a cycle. The vertical part
# is still a forest.

# In[4]:

p = plan(profiles[5])
print(profiles[5].multiplicities, nu_tilde(profiles[5]))
print(resolve_report(profiles[5])["checks"])
print(sorted(sorted(e) for e in dual_graph(p).exceptional.edges))
