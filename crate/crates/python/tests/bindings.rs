use pyo3::prelude::*;
use pyo3::types::PyDict;

use cheeger_lab_py::cheeger_lab_module;

fn with_module(script: &std::ffi::CStr) {
    Python::attach(|py| {
        let m = PyModule::new(py, "cheeger_lab").unwrap();
        cheeger_lab_module(&m).unwrap();
        let globals = PyDict::new(py);
        globals.set_item("cl", m).unwrap();
        if let Err(e) = py.run(script, Some(&globals), None) {
            e.display(py);
            panic!("python check failed");
        }
    });
}

#[test]
fn exact_values_come_back_as_fractions() {
    with_module(
        c"
from fractions import Fraction
p3 = cl.Graph(3, [(0, 1, 1), (1, 2, 1)])
assert [cl.cheeger_k(p3, k)[0] for k in (1, 2, 3)] == [0, 1, 1]
assert isinstance(cl.cheeger_k(p3, 2)[0], Fraction)
c3 = cl.Graph.generate('cycle', 3)
assert cl.dirichlet_k(c3, 2)[0] == Fraction(1, 2)
assert cl.maxmin_cheeger(c3, 2)[0] == Fraction(1, 2)
assert cl.dirichlet_cheeger(c3, [0, 1]) == Fraction(1, 2)
g = cl.Graph(2, [(0, 1, '0.25')], mu=['1/3', 2])
assert g.mu == [Fraction(1, 3), Fraction(2)]
assert g.edges == [(0, 1, Fraction(1, 4))]
assert g.expansion([0]) == Fraction(3, 4)
",
    );
}

#[test]
fn errors_map_to_python_exceptions() {
    with_module(
        c"
for call in (lambda: cl.Graph(2, [(0, 2, 1)]), lambda: cl.Graph.generate('blob', 3), lambda: cl.verify('nope')):
    try:
        call()
    except cl.CheegerError:
        pass
    else:
        raise AssertionError('accepted bad input')
try:
    cl.cheeger_k(cl.Graph.generate('path', 14), 4, budget=1000)
except cl.BudgetExceeded:
    pass
else:
    raise AssertionError('budget ignored')
assert issubclass(cl.BudgetExceeded, ValueError)
",
    );
}

#[test]
fn reports_are_dicts() {
    with_module(
        c"
t = cl.Graph.generate('random-tree', 7, seed=4, random_weights=True)
r = cl.compute(t)
assert r['command'] == 'compute' and r['all_pass']
assert all(row['bracket']['exact'] for row in r['rows'])
c = cl.forest_certificate(t, 3)
assert c['equal'] and len(c['removed']) <= 2
v = cl.verify('intersection', seed=2, graphs=100)
assert v['passed'] and v['suites'][0]['suite'] == 'intersection'
",
    );
}
