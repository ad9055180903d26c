from __future__ import annotations

from dataclasses import asdict, dataclass, field

import numpy as np


@dataclass
class EstimationResult:
    beta_hat: np.ndarray
    vcov: np.ndarray
    se: np.ndarray
    loglik: float
    iterations: int
    converged: bool
    n_informative: int
    n_links: int
    rho_hat: float
    avg_degree: float = float("nan")
    model: str = "dyad-fe"
    enumerator: str = ""
    separated: bool = False
    ridge: float = 0.0
    n_clusters: int = 0
    timing: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = asdict(self)
        for key in ("beta_hat", "vcov", "se"):
            out[key] = np.asarray(out[key], dtype=float).tolist()
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "EstimationResult":
        kwargs = {k: v for k, v in data.items() if k in cls.__dataclass_fields__}
        for key in ("beta_hat", "vcov", "se"):
            kwargs[key] = np.asarray(kwargs[key], dtype=float)
        return cls(**kwargs)
