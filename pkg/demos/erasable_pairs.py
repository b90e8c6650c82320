# coding: utf-8

# # Erasable weighted pairs
#
# A weighted pair is a weighted graph with a distinguished vertex v. Blow-ups
# are allowed only at v or on edges through v, and the new vertex becomes
# distinguished. The pair is erasable when, after some such blow-ups, the
# graph without the distinguished vertex blows down to nothing.

# In[1]:

from cusppencil.erasability import ell_bounded, parse_chain_pair, replay_witness, star_pair, triangle_pair

print(ell_bounded(parse_chain_pair("[-2,-1,-1*]")).as_dict())


# One blow-up at the distinguished vertex erases [0*, -2].

# In[2]:

p = parse_chain_pair("[0*,-2]")
r = ell_bounded(p)
print(r.as_dict())
print(replay_witness(p, r.witness))


# The bounded search finds no witness for these pairs. Some close quickly by
# the pruning rules; the others run out of depth.

# In[3]:

cases = {"[-3,-1*,-1,-2]": parse_chain_pair("[-3,-1*,-1,-2]")}
cases.update({f"triangle {x}": triangle_pair(x) for x in (-4, -1, 0)})
cases.update({f"star {y}": star_pair(y) for y in (-2, 0)})
for name, pair in cases.items():
    out = ell_bounded(pair, 6)
    print(name, out.verdict, out.reason, out.nodes)
