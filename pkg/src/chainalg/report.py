"""Check execution and report rendering (JSON and Markdown).

Reports are deterministic: records keep a canonical order and carry no
timing unless explicitly requested (timings vary across runs and would
break the byte-identity guarantee that CI relies on).
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field

from .rings import Ring, ZZ
from .graded import format_vector
from .complexes import (
    homology,
    is_essential,
    transition_automorphism,
)
from .bialgebra import (
    BialgebraData,
    check_axioms,
    lambda_eta,
    check_involutivity,
    check_cc_implies_antisymmetry,
    check_loday_ronco,
    check_lemma_c_lambda_eta,
    secondary_relation_apply,
)
from .cone_product import (
    ConeProductData,
    derive_secondary_ops,
    cross_check_components,
    check_cone_associativity,
    check_assoc_implies_infinitesimal,
    cone_data_from_bialgebra,
)
from . import fixtures as fx


@dataclass
class CheckRecord:
    id: str
    status: str          # pass | fail | error | skip | info
    detail: str = ""
    elapsed_ms: float = None

    @property
    def failed(self) -> bool:
        return self.status in ("fail", "error")


@dataclass
class Report:
    title: str
    records: list = field(default_factory=list)

    @property
    def failed(self) -> bool:
        return any(r.failed for r in self.records)

    def summary(self) -> dict:
        counts = {"total": len(self.records)}
        for s in ("pass", "fail", "error", "skip", "info"):
            counts[s] = sum(1 for r in self.records if r.status == s)
        return counts


def _timed(record_id, fn, timings: bool) -> CheckRecord:
    start = time.monotonic()
    try:
        status, detail = fn()
    except Exception as e:  # surfaced as a check error, never a crash
        status, detail = "error", f"{type(e).__name__}: {e}"
    rec = CheckRecord(record_id, status, detail)
    if timings:
        rec.elapsed_ms = round((time.monotonic() - start) * 1000, 3)
    return rec


# ---------------------------------------------------------------------------
# Check implementations
# ---------------------------------------------------------------------------

def _axioms_records(inst: BialgebraData, prefix: str, timings: bool):
    out = []
    rep = check_axioms(inst)
    for r in rep.results:
        detail = f"{r.inputs_checked} inputs"
        if not r.passed:
            detail = (f"witness {r.witness_input}: lhs = {r.witness_lhs}, "
                      f"rhs = {r.witness_rhs}")
        rec = CheckRecord(f"{prefix}axioms.{r.axiom}",
                          "pass" if r.passed else "fail", detail)
        if timings:
            rec.elapsed_ms = r.elapsed_ms
        out.append(rec)
    return out


def _lambda_eta_record(inst: BialgebraData, prefix: str):
    res = lambda_eta(inst)
    status = "pass" if res.symmetric else "fail"
    detail = f"lam(eta) = {format_vector(res.value)}"
    if not res.symmetric:
        detail += "; twist symmetry fails"
    return CheckRecord(f"{prefix}lambda-eta", status, detail)


def _conditional_record(rec_id, rep):
    if not rep.hypotheses_met:
        return CheckRecord(rec_id, "skip", rep.detail)
    return CheckRecord(rec_id, "pass" if rep.passed else "fail", rep.detail)


def bialgebra_records(inst: BialgebraData, checks, prefix: str = "",
                      timings: bool = False, reverse_bivector=None):
    out = []
    for check in checks:
        if check == "axioms":
            out.extend(_axioms_records(inst, prefix, timings))
        elif check == "lambda-eta":
            out.append(_lambda_eta_record(inst, prefix))
        elif check == "involutivity":
            out.append(_conditional_record(f"{prefix}involutivity",
                                           check_involutivity(inst)))
        elif check == "cc-antisymmetry":
            out.append(_conditional_record(f"{prefix}cc-antisymmetry",
                                           check_cc_implies_antisymmetry(inst)))
        elif check == "loday-ronco":
            out.append(_timed(f"{prefix}loday-ronco",
                              lambda: _loday(inst), timings))
        elif check == "reverse-bivector-gate":
            rep = check_lemma_c_lambda_eta(reverse_bivector, inst)
            out.append(CheckRecord(
                f"{prefix}reverse-bivector-gate",
                "pass" if rep.passed else "fail",
                "supplied bivector equals lam(eta)" if rep.passed else rep.detail))
        else:
            out.append(CheckRecord(f"{prefix}{check}", "error",
                                   f"unknown check {check!r}"))
    return out


def _loday(inst):
    r = check_loday_ronco(inst)
    if r.passed:
        return "pass", f"{r.inputs_checked} inputs"
    return "fail", (f"witness {r.witness_input}: lhs = {r.witness_lhs}, "
                    f"rhs = {r.witness_rhs}")


def cone_records(data: ConeProductData, checks, prefix: str = "",
                 timings: bool = False):
    out = []
    ops = None

    def get_ops():
        nonlocal ops
        if ops is None:
            ops = derive_secondary_ops(data)
        return ops

    for check in checks:
        if check == "components":
            def run_components():
                res = cross_check_components(get_ops())
                return ("pass" if res.passed else "fail"), res.describe()
            out.append(_timed(f"{prefix}components", run_components, timings))
        elif check == "associativity":
            def run_assoc():
                res = check_cone_associativity(get_ops())
                return (("pass", "associative on the safe window")
                        if res.passed else ("fail", res.witness))
            out.append(_timed(f"{prefix}associativity", run_assoc, timings))
        elif check == "assoc-infinitesimal":
            def run_ai():
                res = check_assoc_implies_infinitesimal(data)
                if not res.precondition_ok:
                    return "fail", f"precondition: {res.detail}"
                return ("pass" if res.passed else "fail"), res.detail
            out.append(_timed(f"{prefix}assoc-infinitesimal", run_ai, timings))
        else:
            out.append(CheckRecord(f"{prefix}{check}", "error",
                                   f"unknown check {check!r}"))
    return out


def complex_records(bundle, checks, prefix: str = "", timings: bool = False):
    out = []
    for check in checks:
        if check == "d-squared":
            out.append(CheckRecord(f"{prefix}d-squared", "pass",
                                   "verified at construction"))
        elif check == "essential":
            if bundle.top is None:
                out.append(CheckRecord(f"{prefix}essential", "error",
                                       "scenario has no 'top' field"))
            else:
                ok = is_essential(bundle.complex, bundle.top)
                out.append(CheckRecord(f"{prefix}essential",
                                       "pass" if ok else "fail",
                                       f"top degree {bundle.top}"))
        else:
            out.append(CheckRecord(f"{prefix}{check}", "error",
                                   f"unknown check {check!r}"))
    return out


def homology_records(bundle, with_cone: bool, prefix: str = ""):
    from .complexes import mapping_cone

    out = [CheckRecord(f"{prefix}homology", "info", str(homology(bundle.complex)))]
    if bundle.pair_map is not None:
        out.append(CheckRecord(f"{prefix}homology.pair", "info",
                               str(homology(bundle.pair_map.source))))
    if with_cone:
        if bundle.pair_map is None:
            out.append(CheckRecord(f"{prefix}cone", "error",
                                   "no chain map available to build a cone"))
            return out
        cone = mapping_cone(bundle.pair_map)
        out.append(CheckRecord(f"{prefix}homology.cone", "info",
                               str(homology(cone.complex))))
        if bundle.secondary is not None:
            res = transition_automorphism(cone, bundle.secondary)
            out.append(CheckRecord(
                f"{prefix}transition.unipotent",
                "pass" if res.unipotent else "fail",
                "(phi - id)^2 = 0" if res.unipotent else "not unipotent"))
            out.append(CheckRecord(
                f"{prefix}transition.homology-action",
                "pass" if res.nontrivial_on_homology else "fail",
                "nontrivial on cone homology" if res.nontrivial_on_homology
                else "acts as the identity on cone homology"))
    return out


# ---------------------------------------------------------------------------
# Fixture suites
# ---------------------------------------------------------------------------

def fixture_records(name: str, ring: Ring = ZZ, window=None,
                    suite: str = "check", timings: bool = False):
    """Records for a shipped fixture.  suite: "check" (axioms only) or
    "demo" (the full canned suite for that fixture)."""
    window = window or fx.TruncationWindow()
    prefix = f"{name}."
    if name == "tstar-s1":
        return _tstar_records(ring, prefix)
    inst = fx.make_fixture(name, window, ring)
    if suite == "check":
        return bialgebra_records(inst, ("axioms", "lambda-eta"), prefix, timings)
    records = bialgebra_records(inst, ("axioms", "lambda-eta"), prefix, timings)
    if name in ("lambda-s3", "omega-s3"):
        records.append(_conditional_record(f"{prefix}involutivity",
                                           check_involutivity(inst)))
        records.append(_conditional_record(f"{prefix}cc-antisymmetry",
                                           check_cc_implies_antisymmetry(inst)))
    if name.startswith("omega-s1"):
        records.append(_timed(f"{prefix}loday-ronco", lambda: _loday(inst),
                              timings))
    if name.endswith("-plus") or name.endswith("-minus"):
        records.append(_timed(f"{prefix}reverse-coproduct",
                              lambda: _reverse_coproduct(name, ring, window),
                              timings))
    if name in ("lambda-s3", "lambda-s1-plus", "lambda-s1-minus"):
        n = 3 if name == "lambda-s3" else 1
        data = cone_data_from_bialgebra(inst, n=n)
        records.extend(cone_records(
            data, ("components", "associativity", "assoc-infinitesimal"),
            prefix, timings))
    return records


def _reverse_coproduct(name: str, ring: Ring, window):
    """Reconstruct the opposite-variant coproduct via the secondary
    relation and compare with the directly built fixture."""
    base, variant = name.rsplit("-", 1)
    other = f"{base}-{'minus' if variant == 'plus' else 'plus'}"
    inst = fx.make_fixture(name, window, ring)
    target = fx.make_fixture(other, window, ring)
    c = fx.reverse_data_bivector(inst)
    if variant == "minus":
        c = -c
    rebuilt = secondary_relation_apply(inst.mu, inst.lam, c, -c)
    for nm in inst.safe_names:
        got = rebuilt.eval_basis(nm)
        want = target.lam.eval_basis(nm)
        if got != want:
            return "fail", (f"mismatch at {nm}: rebuilt {format_vector(got)}, "
                            f"direct {format_vector(want)}")
    return "pass", (f"{other} reconstructed from {name} with "
                    f"c = {format_vector(c)} on {len(inst.safe_names)} inputs")


def _tstar_records(ring: Ring, prefix: str):
    bundle = fx.make_tstar_s1(ring)
    out = []
    c_zero = all(bundle.continuation.f.eval_basis(e.name).is_zero()
                 for e in bundle.minus.module.basis())
    out.append(CheckRecord(f"{prefix}continuation-vanishes",
                           "pass" if c_zero else "fail",
                           "c = 0" if c_zero else "continuation map is nonzero"))
    res = transition_automorphism(bundle.cone, bundle.secondary)
    out.append(CheckRecord(f"{prefix}transition.chain-map", "pass",
                           "verified at construction"))
    out.append(CheckRecord(f"{prefix}transition.unipotent",
                           "pass" if res.unipotent else "fail",
                           "(phi - id)^2 = 0"))
    out.append(CheckRecord(f"{prefix}transition.homology-action",
                           "pass" if res.nontrivial_on_homology else "fail",
                           "nontrivial on cone homology"
                           if res.nontrivial_on_homology else
                           "acts as the identity on cone homology"))
    out.append(CheckRecord(f"{prefix}cone-homology", "info",
                           str(homology(bundle.cone.complex))))
    return out


# ---------------------------------------------------------------------------
# Rendering
# ---------------------------------------------------------------------------

def render_json(report: Report) -> str:
    doc = {
        "title": report.title,
        "records": [
            {k: v for k, v in (("id", r.id), ("status", r.status),
                               ("detail", r.detail),
                               ("elapsed_ms", r.elapsed_ms))
             if v is not None}
            for r in report.records
        ],
        "summary": report.summary(),
    }
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


_MARKS = {"pass": "ok", "fail": "FAIL", "error": "ERROR",
          "skip": "skipped", "info": "."}


def render_markdown(report: Report) -> str:
    lines = [f"# {report.title}", ""]
    width = max((len(r.id) for r in report.records), default=0)
    for r in report.records:
        mark = _MARKS.get(r.status, r.status)
        line = f"- `{r.id:<{width}}` **{mark}**"
        if r.detail:
            line += f" {r.detail}"
        if r.elapsed_ms is not None:
            line += f" ({r.elapsed_ms} ms)"
        lines.append(line)
    s = report.summary()
    lines.append("")
    lines.append(f"**{s['pass']} passed, {s['fail']} failed, "
                 f"{s['error']} errors, {s['skip']} skipped, "
                 f"{s['info']} informational ({s['total']} total).**")
    return "\n".join(lines) + "\n"
