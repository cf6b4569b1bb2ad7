"""Walk the 8-vertex example: sign table of both local optima across temperatures."""
from annealmax.anneal import TIGHT_A, is_local_opt_at_p, verify_tight_trajectory
from annealmax.multilinear import F_eval, mix_point
from annealmax.setfn import tight_example

if __name__ == "__main__":
    f = tight_example()
    rep = verify_tight_trajectory(f)
    B = rep.second_set
    print("p     F(A)      A-local  F(B)      B-local")
    for k in range(0, 51, 5):
        p = 0.5 + k / 100
        fa = F_eval(f, mix_point(TIGHT_A, p, 8))
        fb = F_eval(f, mix_point(B, p, 8))
        print(f"{p:.2f}  {fa:8.4f}  {str(is_local_opt_at_p(f, TIGHT_A, p)[0]):<7}  {fb:8.4f}  {is_local_opt_at_p(f, B, p)[0]}")
    for c in rep.checks:
        print(("PASS " if c.passed else "FAIL ") + c.name, c.detail)
    print(f"best along the trajectory {rep.best_along_trajectory:g} of {rep.opt:g} ({rep.ratio:.4f})")
