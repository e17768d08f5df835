#!/usr/bin/env python3
"""Smoke test for the starkindex_py extension module.

Builds nothing itself: expects `cargo build -p starkindex-py` (debug or
release) to have produced the cdylib, copies it next to a temp dir under
the importable name, and exercises the main entry points.
"""

import json
import shutil
import subprocess
import sys
import tempfile
from fractions import Fraction
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent


def locate_extension() -> Path:
    names = ["libstarkindex_py.so", "starkindex_py.so", "libstarkindex_py.dylib"]
    for profile in ("release", "debug"):
        for name in names:
            p = ROOT / "target" / profile / name
            if p.exists():
                return p
    print("extension not built; run: cargo build -p starkindex-py", file=sys.stderr)
    sys.exit(1)


def main() -> None:
    ext = locate_extension()
    workdir = Path(tempfile.mkdtemp(prefix="starkindex_py_"))
    shutil.copy(ext, workdir / "starkindex_py.so")
    sys.path.insert(0, str(workdir))
    import starkindex_py as sx

    # Smith normal form.
    assert sx.snf([[2, 1], [0, 3]]) == ["1", "6"]
    assert sx.snf([[2, 0], [0, 6]]) == ["2", "6"]

    # Minus idempotent for the sextic group: ½ − ½γ³.
    e_minus = [Fraction(n, d) for (n, d) in sx.minus_idempotent(6)]
    assert e_minus == [
        Fraction(1, 2), 0, 0, Fraction(-1, 2), 0, 0,
    ], e_minus

    # Rational idempotents for m = 3: the ξ₆ and ξ₂ classes.
    idems = sx.rational_idempotents(6)
    assert [orbit for orbit, _ in idems] == [[1, 5], [3]]
    xi6 = [Fraction(n, d) for (n, d) in idems[0][1]]
    assert xi6 == [Fraction(c, 6) for c in (2, 1, -1, -2, -1, 1)], xi6

    # κ examples and the Norm identity Norm(κ_{n,m}) = 2^{n+2m}.
    assert sx.kappa(0, 0) == ["1", "0", "0"]
    assert sx.kappa(1, 0) == ["0", "1", "1"]
    assert sx.kappa(0, 1) == ["-1", "1", "1"]
    for n in range(3):
        for m in range(3):
            coords = [int(c) for c in sx.kappa(n, m)]
            assert int(sx.norm_form(coords)) == 2 ** (n + 2 * m)

    # Generator dichotomy: ⟨1−σ, 2⟩ is principal, ⟨3, 1−σ⟩ is not.
    g, principal = sx.find_generator([[1, -1, 0], [2, 0, 0]])
    assert principal and g == ["0", "1", "1"], (g, principal)
    g, principal = sx.find_generator([[3, 0, 0], [1, -1, 0]])
    assert not principal and int(sx.norm_form([int(c) for c in g])) == 9

    # Tate cohomology: trivial C2-action on Z has Ĥ⁰ = Z/2, Ĥ¹ = 1;
    # the sign action flips them; Z[H] is cohomologically trivial.
    assert sx.tate_h0(2, 1, [], [[1]]) == ["2"]
    assert sx.tate_h1(2, 1, [], [[1]]) == []
    assert sx.tate_h1(2, 1, [], [[-1]]) == ["2"]
    assert sx.herbrand_quotient(2, 1, [], [[-1]]) == ("1", "2")
    assert sx.tate_h0(3, 3, [], [[0, 1, 0], [0, 0, 1], [1, 0, 0]]) == []
    assert sx.tate_h1(3, 3, [], [[0, 1, 0], [0, 0, 1], [1, 0, 0]]) == []

    # Module orders through the Fitting ideal: Z[i]/(2+i) has 5 elements.
    assert sx.module_order("Z[i]", 1, [[[2, 1]]]) == "5"
    assert sx.fitting_order("Z[i]", 1, [[[2, 1]]]) == "5"
    # Over the non-maximal Z[H], base change grows ⟨3, 1−σ⟩ to norm 9.
    assert sx.module_order("Z[H]", 1, [[[3, 0, 0]], [[1, -1, 0]]]) == "3"
    assert sx.fitting_order("Z[H]", 1, [[[3, 0, 0]], [[1, -1, 0]]]) == "9"

    # End to end: synthesize one record per degree and verify it.
    paths = []
    for m, seed in [(1, 11), (2, 12), (3, 13)]:
        rec = sx.synthesize_record(m, 2, seed)
        p = workdir / f"record_m{m}.json"
        p.write_text(rec)
        paths.append(str(p))
    code, reports = sx.verify_files(paths)
    assert code == 0, f"exit code {code}"
    for line in reports:
        rep = json.loads(line)
        assert rep["overall"] == "PASS", rep
        assert rep["p1"]["index"] == rep["p1"]["target"]

    # The CLI agrees with the library on the same files.
    cli = ROOT / "target" / "debug" / "starkindex"
    if cli.exists():
        out = subprocess.run(
            [str(cli), "verify", *paths], capture_output=True, text=True
        )
        assert out.returncode == 0, out.stderr
        assert out.stdout.count("overall: PASS") == 3

    print("starkindex_py smoke test: all checks passed")


if __name__ == "__main__":
    main()
