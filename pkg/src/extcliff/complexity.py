"""The sixteen-cell classical simulation complexity table and task classification.

Each task family is fixed by three binary choices (adaptivity, input kind,
number of output lines); crossing with weak/strong simulation gives sixteen
cells.  Seven cells carry a direct result; the rest follow by taking subsets
(Cl-P is inherited downwards), supersets (hardness is inherited upwards) and
the fact that efficient strong simulation yields efficient weak simulation.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass

from .circuit import AdaptiveController, CircuitProgram, ProductInput
from .errors import HardClassError

CLP = "Cl-P"
SHARP_P = "#P-hard"
QC_HARD = "QC-hard"
PH_COLLAPSE = "not Cl-P unless PH collapses"


@dataclass(frozen=True)
class TaskClass:
    """Which of the eight task families a circuit belongs to."""

    adaptive: bool
    product_input: bool
    many_outputs: bool

    @property
    def labels(self) -> tuple[str, str, str]:
        return (
            "ADAPT" if self.adaptive else "NONADAPT",
            "IN(PROD)" if self.product_input else "IN(BITS)",
            "OUT(MANY)" if self.many_outputs else "OUT(1)",
        )

    def __str__(self) -> str:
        return ", ".join(self.labels)


@dataclass(frozen=True)
class Verdict:
    complexity: str
    theorem: int
    direct: bool  # False when inherited from another cell

    @property
    def efficient(self) -> bool:
        return self.complexity == CLP

    def __str__(self) -> str:
        how = "" if self.direct else ", implied"
        return f"{self.complexity} (Theorem {self.theorem}{how})"


def _cell(adaptive: bool, product: bool, many: bool, mode: str) -> Verdict:
    if mode == "strong":
        if adaptive:
            # adaptive + basis input + one output already encodes #SAT
            return Verdict(SHARP_P, 2, not product and not many)
        if product:
            if many:
                return Verdict(SHARP_P, 6, True)
            return Verdict(CLP, 1, True)
        if many:
            return Verdict(CLP, 4, True)
        return Verdict(CLP, 4, False)
    if mode == "weak":
        if adaptive:
            if product:
                return Verdict(QC_HARD, 3, not many)
            return Verdict(CLP, 5, many)
        if product:
            if many:
                return Verdict(PH_COLLAPSE, 7, True)
            return Verdict(CLP, 1, False)
        return Verdict(CLP, 4, False)
    raise ValueError(f"mode must be 'weak' or 'strong', not {mode!r}")


COMPLEXITY_TABLE: dict[tuple[bool, bool, bool, str], Verdict] = {
    (a, p, m, mode): _cell(a, p, m, mode)
    for a in (False, True)
    for p in (False, True)
    for m in (False, True)
    for mode in ("weak", "strong")
}


def verdict(tc: TaskClass, mode: str) -> Verdict:
    return COMPLEXITY_TABLE[(tc.adaptive, tc.product_input, tc.many_outputs, mode)]


def task_class(
    c: CircuitProgram,
    controller: AdaptiveController | None = None,
    lines: Sequence[int] | None = None,
) -> TaskClass:
    """Class of the task as declared by its representation.

    ``lines`` overrides the output lines, e.g. for a marginal query.
    """
    out = c.output_lines if lines is None else lines
    return TaskClass(
        adaptive=controller is not None or not c.is_nonadaptive,
        product_input=isinstance(c.input, ProductInput),
        many_outputs=len(out) > 1,
    )


def engines_for(tc: TaskClass) -> list[str]:
    """Engines in this package that accept the task class."""
    names = []
    if not tc.adaptive and not tc.many_outputs:
        names.append("strong-out1-prod")
    if not tc.adaptive and not tc.product_input:
        names.append("strong-bits-marginal")
    if not tc.product_input:
        names.append("sample-adaptive-bits")
    if not tc.adaptive and tc.product_input and not tc.many_outputs:
        names.append("sample-out1-prod")
    names.append("oracle")
    return names


def refusal(tc: TaskClass, mode: str) -> HardClassError:
    v = verdict(tc, mode)
    kind = "strong" if mode == "strong" else "weak"
    return HardClassError(
        f"{kind} simulation of {tc} tasks is {v.complexity} (Theorem {v.theorem}); "
        f"no efficient engine exists. Use the dense oracle (--force-oracle, "
        f"at most 16 lines) for small instances.",
        theorem=v.theorem,
    )


def require_efficient(tc: TaskClass, mode: str) -> None:
    if not verdict(tc, mode).efficient:
        raise refusal(tc, mode)


def classification_report(c: CircuitProgram, controller: AdaptiveController | None = None) -> str:
    tc = task_class(c, controller)
    weak = verdict(tc, "weak")
    strong = verdict(tc, "strong")

    def short(v: Verdict) -> str:
        return v.complexity if v.efficient else str(v)

    engines = engines_for(tc)
    if engines == ["oracle"]:
        engine_text = "oracle only"
    else:
        engine_text = ", ".join(engines)
    lines = [
        f"{tc}: strong {short(strong)}, weak {short(weak)}",
        f"strong: {strong}",
        f"weak: {weak}; engines: {engine_text}",
    ]
    return "\n".join(lines)
