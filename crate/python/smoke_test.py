"""Smoke test for the compiled `hvclust` extension.

Build and install it first:

    pip install maturin
    maturin build --release -m crates/py/Cargo.toml
    pip install target/wheels/hvclust-*.whl
"""

import math

import hvclust


def close(a, b, rel):
    return abs(a - b) <= rel * abs(b)


def main():
    avg = hvclust.c_average("max-dense", 2.5, 10**6)
    assert close(avg["c_avg"], avg["c_max_closed"], 1e-6), avg
    print(f"C(max-dense, tau=2.5, N=1e6) = {avg['c_avg']:.6e}")

    assert close(hvclust.c_ab_h("poisson", 2.5, 10**6, 1000.0), 0.00120298227405461138, 1e-8)
    assert close(hvclust.lerch_phi(0.5, 1.0, 1.0), 2 * math.log(2), 1e-12)
    assert f"{hvclust.persistence_threshold_n(2.3):.2e}" == "2.37e+04"

    row = hvclust.table2_terms(0.1)
    assert [round(row[k], 4) for k in ("pi_over_sin", "inv_s_one_minus_s", "pi2_cos_over_sin2", "inv_square_diff")] == [
        10.1664, 11.1111, 98.2972, 98.7654
    ], row

    cut = hvclust.natural_cutoff(2.5, 10**4)
    assert cut["lower"] <= cut["exact"] <= cut["upper"], cut

    for kernel in ("max-dense", "poisson", "max-random"):
        assert hvclust.validate_kernel(kernel)["all_passed"], kernel

    sim = hvclust.simulate("max-random", 2.6, 2000, replicas=4, seed=3)
    assert sim == hvclust.simulate("max-random", 2.6, 2000, replicas=4, seed=3)
    print(f"simulated C = {sim['c_global']['mean']:.4f} +- {sim['c_global']['stderr']:.4f}")

    try:
        hvclust.c_average("poisson", 3.5, 10**4)
    except ValueError as e:
        print(f"rejected tau = 3.5: {e}")
    else:
        raise AssertionError("tau = 3.5 accepted")

    print("smoke test passed")


if __name__ == "__main__":
    main()
