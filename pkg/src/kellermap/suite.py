"""Seeded invariant suite over generated corpora.

Every check here is something the theory guarantees for the generated
maps, so any failure is reported as a theorem contradiction.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction

from kellermap.druzkowski import (
    corpus_seed,
    expand,
    gen_random_druzkowski,
    gen_triangular_druzkowski,
    gen_triangular_keller,
    homogeneous_slice,
    keller_facts_check,
    kernel_equality_check,
    structural_jacobian,
)
from kellermap.errors import KellerMapError
from kellermap.matrix import RationalMatrix, is_nilpotent
from kellermap.poly import Polynomial
from kellermap.polymap import (
    PolyMap,
    collides_on_line,
    conjugate,
    conjugate_normalize,
    invert_fixed_point,
    invert_theorem3,
    is_keller,
    jacobian,
    line_injectivity_certificate,
    verify_ideal_remark,
)

SHAPES = tuple(itertools.product((2, 3, 4), (2, 3)))
# scrambled maps lose sparsity; keep their BCW truncation small
SCRAMBLE_SHAPES = ((2, 2), (2, 3), (3, 2), (3, 3), (4, 2))


@dataclass
class CheckResult:
    name: str
    cases: int = 0
    failures: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def fail(self, what: str) -> None:
        self.failures.append(what)

    def line(self) -> str:
        status = "pass" if self.passed else "FAIL"
        text = f"{self.name}: {status} ({self.cases} cases)"
        if self.failures:
            text += f" first failure: {self.failures[0]}"
        return text


def keller_corpus(seed: int, count: int) -> list[tuple[str, PolyMap]]:
    """``count`` maps from each generator family, cycling through SHAPES."""
    maps = []
    for kind in ("triangular-keller", "triangular-druzkowski"):
        for i in range(count):
            n, d = SHAPES[i % len(SHAPES)]
            s = corpus_seed(seed, i)
            if kind == "triangular-keller":
                f = gen_triangular_keller(n, d, s)
            else:
                f = expand(gen_triangular_druzkowski(n, d, s))
            maps.append((f"{kind}-n{n}-d{d}-s{s}", f))
    return maps


def homogeneous_corpus(seed: int, count: int) -> list[tuple[str, PolyMap]]:
    """Keller maps with homogeneous H: Druzkowski maps and homogeneous slices of triangular maps."""
    rng = random.Random(seed)
    maps = []
    for i in range(count):
        n, d = SHAPES[i % len(SHAPES)]
        s = seed * 7919 + i
        if i % 2 == 0:
            f = expand(gen_triangular_druzkowski(n, d, s))
            label = f"druzkowski-n{n}-d{d}-s{s}"
        else:
            k = rng.randint(2, d)
            f = homogeneous_slice(gen_triangular_keller(n, d, s, terms_per_component=3), k)
            label = f"slice{k}-n{n}-d{d}-s{s}"
        maps.append((label, f))
    return maps


def random_point(rng: random.Random, n: int) -> tuple[Fraction, ...]:
    while True:
        a = tuple(Fraction(rng.randint(-5, 5), rng.randint(1, 4)) for _ in range(n))
        if any(a):
            return a


def random_parameter(rng: random.Random) -> Fraction:
    while True:
        t = Fraction(rng.randint(-20, 20), rng.randint(1, 7))
        if t != 1:
            return t


def random_invertible(rng: random.Random, n: int) -> RationalMatrix:
    while True:
        m = RationalMatrix([[rng.randint(-2, 2) for _ in range(n)] for _ in range(n)])
        if m.det():
            return m


def check_inversion(maps) -> list[CheckResult]:
    bound = CheckResult("degree_bound_dr")
    bcw = CheckResult("bcw_bound")
    agree = CheckResult("algorithm_agreement")
    for label, f in maps:
        bound.cases += 1
        bcw.cases += 1
        agree.cases += 1
        try:
            inv, report = invert_theorem3(f)
        except KellerMapError as exc:
            bound.fail(f"{label}: {exc}")
            continue
        if report.actual_inverse_degree > report.bound:
            bound.fail(f"{label}: degree {report.actual_inverse_degree} > d^r = {report.bound}")
        if report.actual_inverse_degree > report.bcw_bound:
            bcw.fail(f"{label}: degree {report.actual_inverse_degree} > d^(n-1) = {report.bcw_bound}")
        try:
            fp = invert_fixed_point(f, report.d ** (f.nvars - 1))
        except KellerMapError as exc:
            agree.fail(f"{label}: fixed point failed: {exc}")
            continue
        if fp.inverse_map != inv.inverse_map:
            agree.fail(f"{label}: inverses differ")
    return [bound, bcw, agree]


def check_power_linear_kernels(seed: int, count: int) -> CheckResult:
    res = CheckResult("power_linear_kernel")
    for i in range(count):
        n, d = SHAPES[i % len(SHAPES)]
        s = seed * 104729 + i
        spec = gen_random_druzkowski(n, d, s) if i % 4 else gen_triangular_druzkowski(n, d, s)
        res.cases += 1
        try:
            if structural_jacobian(spec) != jacobian(expand(spec).higher_part()):
                res.fail(f"spec s{s}: closed-form JH differs from direct Jacobian")
            kernel_equality_check(spec)
            keller_facts_check(spec)
        except KellerMapError as exc:
            res.fail(f"spec s{s}: {exc}")
    return res


def check_line_certificates(maps, seed: int, points: int = 20, parameters: int = 10) -> list[CheckResult]:
    rng = random.Random(seed)
    cert = CheckResult("line_certificates")
    brute = CheckResult("line_brute_force")
    remark = CheckResult("ideal_remark")
    for label, f in maps:
        remark.cases += 1
        try:
            if not verify_ideal_remark(f):
                remark.fail(label)
        except KellerMapError as exc:
            remark.fail(f"{label}: {exc}")
        for _ in range(points):
            a = random_point(rng, f.nvars)
            cert.cases += 1
            try:
                c = line_injectivity_certificate(f, a)
            except KellerMapError as exc:
                cert.fail(f"{label}: {exc}")
                continue
            if not c.valid:
                cert.fail(f"{label} at {a}: {c.failure}")
            for _ in range(parameters):
                t = random_parameter(rng)
                brute.cases += 1
                if collides_on_line(f, a, t):
                    brute.fail(f"{label}: F({t} a) = F(a) for a = {a}")
    return [cert, brute, remark]


def check_conjugation(seed: int, count: int) -> CheckResult:
    rng = random.Random(seed)
    res = CheckResult("conjugation")
    for i in range(count):
        n, d = SCRAMBLE_SHAPES[i % len(SCRAMBLE_SHAPES)]
        s = seed * 15485863 + i
        base = gen_triangular_keller(n, d, s) if i % 2 else expand(gen_triangular_druzkowski(n, d, s))
        f = conjugate(base, random_invertible(rng, n))
        res.cases += 1
        try:
            conj = conjugate_normalize(f)
            g, r = conj.conjugated, conj.rank
            jg = jacobian(g.higher_part())
            if any(not p.is_zero() for row in jg.entries for p in row[r:]):
                res.fail(f"s{s}: J(G - x) has a nonzero column beyond r = {r}")
            deg_f = invert_fixed_point(f, d ** (n - 1)).inverse_map.degree()
            deg_g = invert_theorem3(g)[0].inverse_map.degree()
            if deg_f != deg_g:
                res.fail(f"s{s}: deg F^-1 = {deg_f} but deg G^-1 = {deg_g}")
        except KellerMapError as exc:
            res.fail(f"s{s}: {exc}")
    return res


def check_keller_nilpotent(maps) -> CheckResult:
    """Keller <=> JH nilpotent for homogeneous H, on Keller maps and on non-Keller controls."""
    res = CheckResult("keller_iff_nilpotent")
    controls = []
    for label, f in maps:
        n = f.nvars
        # adding x_1^d to F_1 breaks nilpotency of JH
        d = max(f.higher_part().degree(), 2)
        x1 = Polynomial.variable(n, 0)
        controls.append((label + "-perturbed", PolyMap([f[0] + x1.pow(d)] + list(f.components[1:]))))
    for label, f in list(maps) + controls:
        res.cases += 1
        keller, _ = is_keller(f)
        nilpotent, _ = is_nilpotent(jacobian(f.higher_part()))
        if keller != nilpotent:
            res.fail(f"{label}: keller={keller} nilpotent={nilpotent}")
    return res


def run_suite(seed: int = 0, count: int = 50) -> list[CheckResult]:
    results = check_inversion(keller_corpus(seed, count))
    results.append(check_power_linear_kernels(seed, count))
    homogeneous = homogeneous_corpus(seed, count)
    results += check_line_certificates(homogeneous, seed)
    results.append(check_conjugation(seed, count))
    results.append(check_keller_nilpotent(homogeneous))
    return results
