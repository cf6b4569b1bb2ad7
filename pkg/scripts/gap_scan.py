"""Symmetric optimum as a function of alpha for the two weighted hard instances (CSV on stdout)."""
import numpy as np

from annealmax.hardness import gap_cardinality, gap_instance2, min_gap_cardinality, min_gap_instance2

if __name__ == "__main__":
    print("alpha,instance_two,cardinality")
    for a in np.linspace(0, 1, 101):
        print(f"{a:.2f},{gap_instance2(a).gap_value:.9f},{gap_cardinality(a).gap_value:.9f}")
    a2, g2 = min_gap_instance2()
    ac, gc = min_gap_cardinality()
    print(f"# instance two: min {g2:.6f} at alpha {a2:.6f}")
    print(f"# cardinality:  min {gc:.6f} at alpha {ac:.6f}")
