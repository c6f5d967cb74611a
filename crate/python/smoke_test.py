"""Smoke test for the tantrix_py extension module.

Build and run from the repository root:

    PYO3_BUILD_EXTENSION_MODULE=1 cargo build --release -p tantrix-py
    cp target/release/libtantrix_py.so python/tantrix_py.so
    python3 python/smoke_test.py
"""

import tantrix_py as t


def main():
    cat = t.catalogue()
    assert len(cat) == 56
    assert t.canonical("yggrry") == ("ggrryy", 1)
    assert t.shape("bggbrr") == "Brid"

    assert t.Instance("").count() == 1
    one = t.Instance("0 0 bggbrr\n")
    assert one.count() == 6 and not one.is_unique() and one.brute_force_count() == 6
    sols = one.solutions(6)
    assert len(sols) == 6 and all(one.check(s) for s in sols)
    assert one.render_svg(sols[1]).startswith("<svg")

    circuit = t.Circuit("n 2\nand 1 2\n")
    assert circuit.count_sat() == 1
    assert circuit.schedule() == "[BOOL,BOOL]\n[AND(0,1)]\n[TEST]\n"
    puzzle = circuit.compile()
    inst = puzzle.instance
    assert inst.count() == 1 and inst.is_unique()
    assert puzzle.extract(inst.solutions(1)[0]) == [True, True]

    dimacs = "p cnf 2 2\n1 2 0\n-1 -2 0\n"
    models = t.models(dimacs)
    p = t.reduce_sat(dimacs)
    sols = p.instance.solutions(8)
    assert sorted(p.extract(s) for s in sols) == sorted(models)
    assert p.port_map_text().startswith("input 1 ")

    report = t.verify_gadgets()
    assert len(report) == 9 and all(ok for _, ok, _ in report)

    try:
        t.Instance("0 0 bbbbbb\n")
    except ValueError:
        pass
    else:
        raise AssertionError("invalid tile accepted")
    print("smoke test ok")


main()
