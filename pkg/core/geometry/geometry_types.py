from dataclasses import dataclass
from typing import Tuple

import numpy as np


@dataclass(frozen=True)
class FaceGeometry:
    k_f: float
    l: Tuple[float, float, float]
    T: Tuple[float, float, float]
    area: float
    dT_ds: np.ndarray  # dT_ds[v, u] = dT_v / ds_u

    def to_json(self) -> dict:
        return {
            "k_f": self.k_f,
            "l": list(self.l),
            "T": list(self.T),
            "area": self.area,
        }


@dataclass(frozen=True)
class FaceGeometryBatch:
    """FaceGeometry for many faces at once; row f belongs to face f."""
    k: np.ndarray      # (F, 3)
    k_f: np.ndarray    # (F,)
    l: np.ndarray      # (F, 3)
    T: np.ndarray      # (F, 3)
    area: np.ndarray   # (F,)
    dT_ds: np.ndarray  # (F, 3, 3)

    def __len__(self) -> int:
        return len(self.k_f)

    def face(self, index: int) -> FaceGeometry:
        return FaceGeometry(
            k_f=float(self.k_f[index]),
            l=tuple(float(x) for x in self.l[index]),  # type: ignore[arg-type]
            T=tuple(float(x) for x in self.T[index]),  # type: ignore[arg-type]
            area=float(self.area[index]),
            dT_ds=self.dT_ds[index].copy(),
        )
