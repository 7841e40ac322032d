"""The two shared-edge length systems, solved step by step."""
from seplab.fixtures import shared_edge_systems
from seplab.length_solver import dines_solve, feasibility_oracle

for name, system in zip(("side by side", "nested"), shared_edge_systems()):
    sol, trace = dines_solve(system)
    print(f"-- {name}")
    for step in trace.steps:
        print(step.to_dict())
    print("lengths:", {k: str(v) for k, v in sorted(sol.lengths.items(), key=lambda kv: int(kv[0][1:]))})
    print("oracle agrees:", feasibility_oracle(system)[0], "substitution ok:", system.satisfied_by(sol.lengths))
