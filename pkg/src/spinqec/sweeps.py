"""Tabular sweep results and the detuning sweep of read-out confidence."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import ZeroProbabilityReadout
from .lattice import StabilizerKind
from .quantum import PauliChannel
from .syndrome import confidence


@dataclass
class SweepResult:
    """Column-oriented sweep table; all columns have one entry per grid point."""

    columns: dict

    def __post_init__(self):
        self.columns = {k: np.asarray(v) for k, v in self.columns.items()}
        lengths = {len(v) for v in self.columns.values()}
        if len(lengths) > 1:
            raise ValueError(f"ragged sweep columns: {lengths}")

    @property
    def names(self) -> list[str]:
        return list(self.columns)

    def __len__(self):
        return len(next(iter(self.columns.values()))) if self.columns else 0

    def __getitem__(self, name):
        return self.columns[name]

    def rows(self):
        for i in range(len(self)):
            yield {k: v[i].item() if hasattr(v[i], "item") else v[i]
                   for k, v in self.columns.items()}


def kind_matched_channel(p_star: float, stab_kind):
    """X errors for plaquettes, Z errors for stars, each with probability ``p_star``."""
    if StabilizerKind(stab_kind) is StabilizerKind.PLAQUETTE:
        return PauliChannel(x=p_star)
    return PauliChannel(z=p_star)


def confidence_sweep(lattice, model, deltas, p_stars=(0.0,), readouts=(1, -1),
                     stab_kind="plaquette", weight=None, channel_for=kind_matched_channel):
    """Read-out confidence on the grid ``deltas x p_stars x readouts``.

    ``model`` is a physical interaction model; only its detuning is varied.
    Zero-probability read-outs give NaN with ``zero_probability`` set.
    """
    out = {"delta": [], "g": [], "p_star": [], "readout": [], "confidence": [],
           "zero_probability": []}
    for delta, p_star, readout in itertools.product(deltas, p_stars, readouts):
        channel = channel_for(p_star, stab_kind)
        try:
            c = confidence(lattice, channel, model.at(delta), stab_kind, readout,
                           weight=weight)
            flag = False
        except ZeroProbabilityReadout:
            c, flag = float("nan"), True
        out["delta"].append(float(delta))
        out["g"].append(model.system.g)
        out["p_star"].append(float(p_star))
        out["readout"].append(int(readout))
        out["confidence"].append(c)
        out["zero_probability"].append(flag)
    return SweepResult(out)
