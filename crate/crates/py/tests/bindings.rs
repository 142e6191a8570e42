use pyo3::prelude::*;
use pyo3::types::PyDict;
use pyo3::wrap_pymodule;

/// Runs `code` with the module bound to `hvclust`.
fn run(code: &str) {
    Python::with_gil(|py| {
        let globals = PyDict::new_bound(py);
        globals.set_item("hvclust", wrap_pymodule!(hvclust_py::hvclust_module)(py)).unwrap();
        if let Err(e) = py.run_bound(code, Some(&globals), None) {
            e.print(py);
            panic!("python check failed");
        }
    });
}

#[test]
fn analytic_values() {
    run(r#"
c = hvclust.c_average("max-dense", 2.5, 1000000)
assert abs(c["c_avg"] / c["c_max_closed"] - 1) < 1e-6, c
assert c["bound_low"] * (1 - 1e-12) <= c["c_avg"] <= c["bound_high"] * (1 + 1e-12)
assert abs(hvclust.c_ab_h("poisson", 2.5, 1000000, 1000.0) / 0.00120298227405461138 - 1) < 1e-8
assert 0 < hvclust.local_clustering("max-random", 2.5, 10000, 5.0) < 1
cut = hvclust.cutoffs(2.5, 1000000)
assert abs(cut["a"] * cut["h_s"] - 1) < 1e-12 and abs(cut["b"] - cut["h_c"] / cut["h_s"]) < 1e-9
row = hvclust.table2_terms(0.5)
assert row["inv_s_one_minus_s"] == 4.0
assert abs(hvclust.lerch_phi(0.5, 1.0, 1.0) - 2 * 0.6931471805599453) < 1e-12
assert "%.2e" % hvclust.persistence_threshold_n(2.3) == "2.37e+04"
nc = hvclust.natural_cutoff(2.5, 10000)
assert nc["lower"] <= nc["exact"] <= nc["upper"]
assert abs(hvclust.kernel_r("poisson", 1.0) - 0.6321205588285577) < 1e-15
assert hvclust.validate_kernel("max-random")["all_passed"]
"#);
}

#[test]
fn simulation_is_reproducible() {
    run(r#"
a = hvclust.simulate("poisson", 2.5, 800, replicas=3, seed=7)
b = hvclust.simulate("poisson", 2.5, 800, replicas=3, seed=7)
assert a == b
assert a["replicas"] == 3 and len(a["bins_h"]) == 20
assert 0 <= a["c_global"]["mean"] <= 1
"#);
}

#[test]
fn errors_map_to_python_exceptions() {
    run(r#"
for call in (lambda: hvclust.c_average("max-dense", 3.5, 10000),
             lambda: hvclust.kernel_r("nope", 1.0),
             lambda: hvclust.simulate("poisson", 2.5, 100, generator="slow"),
             lambda: hvclust.table2_terms(0.7)):
    try:
        call()
    except ValueError:
        pass
    else:
        raise AssertionError("expected ValueError")
"#);
}
