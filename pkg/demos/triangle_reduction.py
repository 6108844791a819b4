"""From a 1-in-3 formula to a graph whose triangle factors encode its solutions."""
from subfree.hardness import make_formula, reduce_formula, solve_1in3, triangle_factor

for clauses in ([(1, 2, 3)], [(1, 2, 3), (1, 2, 4)], [(1, 2, 3), (-1, -2, -3)]):
    inst = make_formula(max(abs(x) for c in clauses for x in c), clauses)
    g, report = reduce_formula(inst)
    tiles = triangle_factor(g)
    print(f"{clauses}: graph {g.n} vertices / {g.m} edges; "
          f"assignment {solve_1in3(inst)}; triangle factor {'found' if tiles else 'absent'}")
