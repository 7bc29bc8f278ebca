"""Acceptance suite: one test per criterion, timed against its stated budget.

Each test prints a single pass/fail line (visible with pytest -s or in the
captured output).  Expected values are frozen from the independent oracles
exercised in the per-module test files.
"""

import contextlib
import io
import os
import random
import time

from kmfan.abelian import (
    FgaGroup,
    GroupHom,
    dual_group,
    dual_hom,
    ext_group,
    hom_kernel_cokernel,
    is_injective,
    is_surjective,
    kernel_subgroup,
    dd_of_hom,
)
from kmfan.cones import Cone
from kmfan.fans import (
    KmFanHom,
    coarse_fan,
    fundamental_group,
    is_classical,
    is_proper,
    is_tame,
    isotropy,
    local_presentation,
    support_contains,
    torsor_group,
    validate_hom,
    zero_fan,
)
from kmfan.gsfans import (
    fold,
    fold_unfold_roundtrip,
    is_gs_representable,
    lattice_data_colimit,
)
from kmfan.intlinalg import IntMatrix
from kmfan.monoids import AffineMonoid

from conftest import (
    build_p22,
    build_p22_source,
    line_fan,
    p22_hom_matrix,
    projective_line_fan,
    random_simplicial_km_fan,
    random_tame_homs,
)
from test_abelian import all_finite_groups, _check_exactness
from test_gsfans import torsion_colimit_fan, nonsaturated_colimit_fan, random_foldable_gsfan
from test_monoids import brute_irreducibles


@contextlib.contextmanager
def criterion(number: int, name: str, budget_seconds: float):
    start = time.monotonic()
    try:
        yield
    except BaseException:
        print(f"criterion {number:02d} ({name}): FAIL")
        raise
    elapsed = time.monotonic() - start
    print(f"criterion {number:02d} ({name}): PASS {elapsed:.2f}s")
    assert elapsed < budget_seconds, f"criterion {number} exceeded {budget_seconds}s"


def test_criterion_01_p22_golden_suite():
    with criterion(1, "p22 golden suite", 1.0):
        fan = build_p22()
        assert fan.validate() == []
        assert not is_classical(fan)
        coarse, _ = coarse_fan(fan)
        assert coarse == projective_line_fan()
        plus = Cone.from_generators([(1,)], 1)
        minus = Cone.from_generators([(-1,)], 1)
        assert isotropy(fan, plus) == FgaGroup(0, (2,))
        assert isotropy(fan, minus) == FgaGroup(0, (2,))
        chart = local_presentation(fan, plus)
        assert chart.stabilizer == FgaGroup(0, (2,))
        assert all(x == 0 for row in chart.action.matrix.entries for x in row)
        hom = validate_hom(
            GroupHom(FgaGroup(2), fan.group, p22_hom_matrix()),
            build_p22_source(),
            fan,
        )
        assert isinstance(hom, KmFanHom)
        assert is_tame(hom)
        assert torsor_group(hom) == FgaGroup(1)
        ker = kernel_subgroup(hom.hom)
        assert ker.lattice_basis().columns() == ((2, 2),)
        assert fundamental_group(fan).is_trivial()


def test_criterion_02_unfolding_counterexamples():
    with criterion(2, "unfolding counterexamples", 2.0):
        colim = lattice_data_colimit(torsion_colimit_fan()).colimit
        assert colim.free_rank == 3
        assert any(d % 2 == 0 for d in colim.torsion)

        fan = nonsaturated_colimit_fan()
        unf = lattice_data_colimit(fan)
        assert unf.colimit == FgaGroup(3)
        wide = Cone.from_generators([(1, 2), (1, -2)], 2)
        _, cok, _ = hom_kernel_cokernel(unf.structure_maps[wide])
        assert cok == FgaGroup(1, (2,))
        assert not is_gs_representable(fan)


def test_criterion_03_ext_involution():
    with criterion(3, "ext involution on all groups of order <= 36", 1.0):
        groups = all_finite_groups(36)
        assert len(groups) == 62
        for a in groups:
            assert ext_group(ext_group(a)) == a


def test_criterion_04_derived_dual_special_formulas():
    with criterion(4, "derived-dual special formulas on 200 tame maps", 10.0):
        surjective = injective = lattice = 0
        for f in random_tame_homs(seed=104, count=200):
            dd = dd_of_hom(f)
            ker, cok, _ = hom_kernel_cokernel(f)
            assert dd.group.free_rank == ker.rank()
            assert dd.group.torsion_order() == cok.torsion_order()
            if is_surjective(f):
                surjective += 1
                assert dd.group == dual_group(ker.group())
            if is_injective(f):
                injective += 1
                assert dd.group == ext_group(cok)
            if f.source.is_lattice() and f.target.is_lattice():
                lattice += 1
                _, cok_dual, _ = hom_kernel_cokernel(dual_hom(f))
                assert dd.group == cok_dual
            _check_exactness(dd)
        assert surjective >= 10 and injective >= 10 and lattice >= 10


def test_criterion_05_dual_dual_identity():
    with criterion(5, "dual-dual identity on 500 cones", 30.0):
        rng = random.Random(105)
        for _ in range(500):
            n = rng.randint(1, 4)
            gens = [
                tuple(rng.randint(-5, 5) for _ in range(n))
                for _ in range(rng.randint(0, 6))
            ]
            cone = Cone.from_generators(gens, n)
            assert cone.dual().dual() == cone


def test_criterion_06_hilbert_basis_oracle():
    with criterion(6, "hilbert bases vs brute force on 50 cones", 60.0):
        rng = random.Random(106)
        checked = 0
        while checked < 50:
            n = rng.randint(1, 3)
            gens = [
                tuple(rng.randint(-3, 3) for _ in range(n))
                for _ in range(rng.randint(1, 4))
            ]
            cone = Cone.from_generators(gens, n)
            if not cone.is_sharp():
                continue
            checked += 1
            hb = AffineMonoid(cone).hilbert_basis()
            oracle = brute_irreducibles(cone, 6)
            in_box = lambda p: all(abs(x) <= 4 for x in p)
            assert {p for p in hb if in_box(p)} == {p for p in oracle if in_box(p)}


def test_criterion_07_fold_unfold_roundtrip():
    with criterion(7, "fold/unfold round trip on 100 GS fans", 60.0):
        rng = random.Random(107)
        for _ in range(100):
            gs = random_foldable_gsfan(rng)
            folded, hom = fold(gs)
            assert folded.validate() == []
            assert is_tame(hom)
            _, cok, _ = hom_kernel_cokernel(dual_hom(gs.beta))
            assert torsor_group(hom) == cok
            assert is_gs_representable(folded)
            assert fold_unfold_roundtrip(folded)


def test_criterion_08_properness():
    with criterion(8, "properness criteria", 1.0):
        point = zero_fan(FgaGroup(0))
        p22 = build_p22()
        to_point = validate_hom(
            GroupHom(p22.group, FgaGroup(0), IntMatrix.zero(0, 2)), p22, point
        )
        assert is_proper(to_point)
        a1 = line_fan()
        a1_to_point = validate_hom(
            GroupHom(a1.group, FgaGroup(0), IntMatrix.zero(0, 1)), a1, point
        )
        assert not is_proper(a1_to_point)
        ident = validate_hom(GroupHom.identity(p22.group), p22, p22)
        assert is_proper(ident)


def test_criterion_09_support_extension_equivalence():
    with criterion(9, "support and one-parameter extensions agree", 10.0):
        rng = random.Random(109)
        a1 = line_fan()
        for _ in range(10):
            fan = random_simplicial_km_fan(rng)
            for _ in range(50):
                n = tuple(
                    rng.randint(-4, 4) for _ in range(fan.group.free_rank)
                ) + tuple(rng.randrange(d) for d in fan.group.torsion)
                hom = GroupHom(
                    FgaGroup(1), fan.group,
                    IntMatrix.from_columns([n], rows=fan.group.ncoords),
                )
                verdict = validate_hom(hom, a1, fan)
                assert support_contains(fan, n) == isinstance(verdict, KmFanHom)


def test_criterion_10_cli_determinism(tmp_path, monkeypatch):
    with criterion(10, "cli determinism against golden files", 10.0):
        import shutil

        from kmfan.cli import run
        from golden_cases import ARTIFACTS, CASES

        here = os.path.dirname(os.path.abspath(__file__))
        golden = os.path.join(here, "golden")
        for name in os.listdir(os.path.join(golden, "inputs")):
            shutil.copy(os.path.join(golden, "inputs", name), tmp_path / name)
        monkeypatch.chdir(tmp_path)
        assert len(CASES) >= 20
        for name, argv, expected_code in CASES:
            outputs = []
            for _ in range(2):
                buf = io.StringIO()
                with contextlib.redirect_stdout(buf):
                    code = run(argv)
                assert code == expected_code, (name, code)
                outputs.append(buf.getvalue())
            assert outputs[0] == outputs[1], name
            with open(os.path.join(golden, "expected", name + ".out"), encoding="utf-8") as fh:
                assert outputs[0] == fh.read(), name
            if name in ARTIFACTS:
                with open(tmp_path / ARTIFACTS[name], "rb") as fh:
                    produced = fh.read()
                with open(os.path.join(golden, "expected", ARTIFACTS[name]), "rb") as fh:
                    assert produced == fh.read(), name
