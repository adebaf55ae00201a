"""Demand panels (product x store x week) and monthly price panels, with file I/O."""

from __future__ import annotations

import csv
from dataclasses import dataclass, fields
from decimal import Decimal, InvalidOperation
from pathlib import Path

import numpy as np

DEMAND_COLUMNS = ("product_id", "store_id", "chain_id", "category_id", "week", "year", "month",
                  "price_agorot", "quantity")
MONTHLY_COLUMNS = ("product_id", "store_id", "chain_id", "category_id", "year", "month", "price_agorot")


class PanelError(ValueError):
    pass


@dataclass
class DemandPanel:
    """Columnar weekly panel. ``price_agorot`` is float so spurious averaged prices survive loading."""

    product_id: np.ndarray
    store_id: np.ndarray
    chain_id: np.ndarray
    category_id: np.ndarray
    week: np.ndarray
    year: np.ndarray
    month: np.ndarray
    price_agorot: np.ndarray
    quantity: np.ndarray

    def __post_init__(self) -> None:
        n = len(self.price_agorot)
        for f in fields(self):
            arr = getattr(self, f.name)
            if len(arr) != n:
                raise PanelError(f"column {f.name} has {len(arr)} rows, expected {n}")

    def __len__(self) -> int:
        return len(self.price_agorot)

    def validate(self) -> None:
        if (self.quantity <= 0).any():
            raise PanelError("quantities must be positive (log is taken)")
        if (self.price_agorot <= 0).any():
            raise PanelError("prices must be positive")
        key = np.stack([self.product_id, self.store_id, self.week])
        if np.unique(key, axis=1).shape[1] != len(self):
            raise PanelError("duplicate (product, store, week) record")

    def subset(self, mask: np.ndarray) -> DemandPanel:
        return DemandPanel(**{f.name: getattr(self, f.name)[mask] for f in fields(self)})

    def pair_codes(self) -> np.ndarray:
        _, codes = np.unique(np.stack([self.product_id, self.store_id]), axis=1, return_inverse=True)
        return codes.ravel()


def _fmt_float(x: float) -> str:
    return repr(float(x))


def _fmt_price(x: float) -> str:
    return str(int(x)) if float(x).is_integer() else repr(float(x))


def write_demand_panel(panel: DemandPanel, path: str | Path) -> None:
    with Path(path).open("w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(DEMAND_COLUMNS)
        cols = [getattr(panel, c) for c in DEMAND_COLUMNS]
        for i in range(len(panel)):
            row = [int(c[i]) for c in cols[:7]]
            row += [_fmt_price(cols[7][i]), _fmt_float(cols[8][i])]
            w.writerow(row)


def _read_rows(path: Path, columns: tuple[str, ...]):
    if not path.exists():
        raise FileNotFoundError(f"panel file not found: {path}")
    with path.open(encoding="utf-8", newline="") as fh:
        rows = csv.reader(line for line in fh if not line.lstrip().startswith("#"))
        header = next(rows, None)
        if header is None or tuple(h.strip() for h in header) != columns:
            raise PanelError(f"{path}: header must be {','.join(columns)}")
        for lineno, row in enumerate(rows, start=2):
            if row:
                if len(row) != len(columns):
                    raise PanelError(f"{path}:{lineno}: expected {len(columns)} fields, got {len(row)}")
                yield lineno, row


def _price(text: str, where: str) -> float:
    try:
        return float(Decimal(text.strip()))
    except InvalidOperation:
        raise PanelError(f"{where}: bad price {text!r}") from None


def load_demand_panel(path: str | Path) -> DemandPanel:
    path = Path(path)
    ints = [[] for _ in range(7)]
    price, qty = [], []
    for lineno, row in _read_rows(path, DEMAND_COLUMNS):
        where = f"{path}:{lineno}"
        try:
            for j in range(7):
                ints[j].append(int(row[j]))
            q = float(row[8])
        except ValueError as exc:
            raise PanelError(f"{where}: {exc}") from None
        price.append(_price(row[7], where))
        qty.append(q)
    cols = [np.array(c, dtype=np.int64) for c in ints]
    panel = DemandPanel(*cols, np.array(price, dtype=np.float64), np.array(qty, dtype=np.float64))
    panel.validate()
    return panel


@dataclass
class MonthlyPanel:
    product_id: np.ndarray
    store_id: np.ndarray
    chain_id: np.ndarray
    category_id: np.ndarray
    year: np.ndarray
    month: np.ndarray
    price_agorot: np.ndarray

    def __len__(self) -> int:
        return len(self.price_agorot)

    @property
    def period(self) -> np.ndarray:
        return self.year * 12 + (self.month - 1)


def load_monthly_panel(path: str | Path) -> MonthlyPanel:
    path = Path(path)
    ints = [[] for _ in range(6)]
    price = []
    for lineno, row in _read_rows(path, MONTHLY_COLUMNS):
        where = f"{path}:{lineno}"
        try:
            for j in range(6):
                ints[j].append(int(row[j]))
        except ValueError as exc:
            raise PanelError(f"{where}: {exc}") from None
        price.append(_price(row[6], where))
    return MonthlyPanel(*(np.array(c, dtype=np.int64) for c in ints), np.array(price, dtype=np.float64))


def write_monthly_panel(panel: MonthlyPanel, path: str | Path) -> None:
    with Path(path).open("w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(MONTHLY_COLUMNS)
        for i in range(len(panel)):
            w.writerow([int(getattr(panel, c)[i]) for c in MONTHLY_COLUMNS[:6]] + [_fmt_price(panel.price_agorot[i])])
