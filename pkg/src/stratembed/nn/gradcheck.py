"""Central finite-difference verification of analytic gradients."""

from dataclasses import dataclass, field

import numpy as np


@dataclass
class GradCheckReport:
    max_rel_error: float
    tolerance: float
    passed: bool
    worst_block: int = -1
    worst_index: int = -1
    per_block_max: list = field(default_factory=list)

    def __str__(self):
        status = "PASS" if self.passed else "FAIL"
        return (
            f"grad check {status}: max relative error {self.max_rel_error:.3e} "
            f"(tolerance {self.tolerance:.0e}, worst block {self.worst_block} "
            f"index {self.worst_index})"
        )


def grad_check(closure, params, tolerance: float = 1e-4, h: float = 1e-5) -> GradCheckReport:
    """Compare the closure's analytic gradients against central differences.

    ``closure()`` must deterministically return ``(loss, grads)`` where grads
    is a list congruent with ``params``; it is re-evaluated with individual
    entries of ``params`` perturbed by +/- h, so it must read the live arrays.
    Relative error per entry is |analytic - numeric| / max(|a| + |n|, 1e-6).
    """
    _, analytic = closure()
    max_rel = 0.0
    worst = (-1, -1)
    per_block = []
    for b, (p, g) in enumerate(zip(params, analytic)):
        flat_p = p.reshape(-1)
        flat_g = np.asarray(g, dtype=np.float64).reshape(-1)
        block_max = 0.0
        for i in range(flat_p.size):
            orig = flat_p[i]
            flat_p[i] = orig + h
            lp, _ = closure()
            flat_p[i] = orig - h
            lm, _ = closure()
            flat_p[i] = orig
            numeric = (lp - lm) / (2.0 * h)
            rel = abs(flat_g[i] - numeric) / max(abs(flat_g[i]) + abs(numeric), 1e-6)
            if rel > block_max:
                block_max = rel
            if rel > max_rel:
                max_rel = rel
                worst = (b, i)
        per_block.append(block_max)
    return GradCheckReport(
        max_rel_error=max_rel,
        tolerance=tolerance,
        passed=max_rel < tolerance,
        worst_block=worst[0],
        worst_index=worst[1],
        per_block_max=per_block,
    )
