from complextrees.config import set_config
from complextrees.connectivity import member_escape_test
from complextrees.core import EPWord, phi
from complextrees.dimension import similarity_dimension
from complextrees.family import eval_family, preset
from complextrees.roots import m0_root_cloud

# Create a custom config
# set_config({"workers": 4})  # Parallel root extraction
# set_config({"escape_frontier_cap": 10**5})  # Smaller escape frontiers
set_config({"seed": 0})

fam = preset("ternary-up")

# The tree at z0 = (-1 + i*sqrt(7))/4 has a tip point at 0
z0 = complex(-1.0, 7.0**0.5) / 4.0
alphabet = eval_family(fam, z0)
print("phi(11~2) =", phi(EPWord.parse("11~2"), alphabet))
print("dimension =", similarity_dimension(alphabet).alpha)
print(member_escape_test(alphabet, 0.0, max_depth=12, frontier_cap=10**4))

# Root connectivity spikes up to order 4
cloud = m0_root_cloud(fam, 4)
print(cloud.to_frame().head())
