"""Bonus weighting, stream normalization, and the combined training reward.

Intrinsic and extrinsic streams are normalized separately, each by a rolling
standard-deviation estimate; bonus weights anneal linearly to zero over the
frame budget so late training optimizes pure task return. Evaluation always
uses raw extrinsic rewards.
"""

import numpy as np

from ..normalize import RollingStd


class BonusSchedule:
    """Weights, annealing, and per-stream normalizers for Eq-style
    training reward = norm(r) + lh(frames) * norm(r_hyper) + le(frames) * norm(r_error).
    """

    def __init__(self, lambda_h, lambda_e, frame_budget, anneal=True,
                 normalize_intrinsic=True, normalize_extrinsic=True,
                 clip_intrinsic=None, clip_extrinsic=None, decay=0.999):
        self.lambda_h0 = lambda_h
        self.lambda_e0 = lambda_e
        self.frame_budget = frame_budget
        self.anneal = anneal
        self.normalize_intrinsic = normalize_intrinsic
        self.normalize_extrinsic = normalize_extrinsic
        self.clip_intrinsic = clip_intrinsic
        self.clip_extrinsic = clip_extrinsic
        self.ext_norm = RollingStd(decay)
        self.hyper_norm = RollingStd(decay)
        self.error_norm = RollingStd(decay)

    def weights(self, frames):
        if not self.anneal:
            return self.lambda_h0, self.lambda_e0
        frac = max(0.0, 1.0 - frames / self.frame_budget)
        return self.lambda_h0 * frac, self.lambda_e0 * frac

    def update_stats(self, extrinsic, r_hyper, r_error):
        self.ext_norm.update(extrinsic)
        if self.lambda_h0 != 0.0:
            self.hyper_norm.update(r_hyper)
        if self.lambda_e0 != 0.0:
            self.error_norm.update(r_error)

    def _norm_ext(self, extrinsic):
        out = np.asarray(extrinsic, dtype=np.float64)
        if self.normalize_extrinsic:
            out = self.ext_norm.normalize(out)
        if self.clip_extrinsic is not None:
            out = np.clip(out, -self.clip_extrinsic, self.clip_extrinsic)
        return out

    def _norm_intr(self, values, tracker):
        out = np.asarray(values, dtype=np.float64)
        if self.normalize_intrinsic:
            out = tracker.normalize(out)
        if self.clip_intrinsic is not None:
            out = np.clip(out, -self.clip_intrinsic, self.clip_intrinsic)
        return out

    def combine(self, extrinsic, r_hyper, r_error, frames):
        """Training reward for one batch of transitions (pure given the
        current normalizer state; call update_stats first to fold the batch
        into the rolling estimates)."""
        lh, le = self.weights(frames)
        out = self._norm_ext(extrinsic)
        if lh != 0.0:
            out = out + lh * self._norm_intr(r_hyper, self.hyper_norm)
        if le != 0.0:
            out = out + le * self._norm_intr(r_error, self.error_norm)
        return out

    def state(self):
        return {"ext": self.ext_norm.state()["sq"],
                "hyper": self.hyper_norm.state()["sq"],
                "error": self.error_norm.state()["sq"]}

    def load_state(self, state):
        self.ext_norm.load_state({"sq": state["ext"]})
        self.hyper_norm.load_state({"sq": state["hyper"]})
        self.error_norm.load_state({"sq": state["error"]})


def combine_rewards(extrinsic, r_hyper, r_error, schedule: BonusSchedule, frames):
    return schedule.combine(extrinsic, r_hyper, r_error, frames)
