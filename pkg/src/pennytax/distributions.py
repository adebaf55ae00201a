"""Price-ending and basket-size distributions, store profiles and their file formats."""

from __future__ import annotations

import csv
import datetime as dt
import enum
import io
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .rng import SplitMix64, cdf_thresholds

NORMALIZATION_TOL = Fraction(1, 10**12)
REVENUE_SHARE_TOL = Fraction(1, 10**9)


class DistributionError(ValueError):
    pass


class ProfileParseError(DistributionError):
    """Bad profile file; the message names the line and field."""

    def __init__(self, path: str, line: int, field: str, reason: str) -> None:
        self.path, self.line, self.field = path, line, field
        super().__init__(f"{path}:{line}: field '{field}': {reason}")


class StoreType(enum.Enum):
    SUPERMARKETS_AND_DRUGSTORES = "supermarkets_drugstores"
    SMALL_GROCERIES = "small_groceries"
    CONVENIENCE_STORES = "convenience_stores"

    @classmethod
    def parse(cls, text: str) -> StoreType:
        key = text.strip().lower().replace(" ", "_").replace("-", "_")
        for member in cls:
            if key in (member.value, member.name.lower()):
                return member
        raise DistributionError(f"unknown store type {text!r}")

    @property
    def order(self) -> int:
        return STORE_ORDER.index(self)


# fixed order used for tie-breaking and report layout
STORE_ORDER = (
    StoreType.SUPERMARKETS_AND_DRUGSTORES,
    StoreType.SMALL_GROCERIES,
    StoreType.CONVENIENCE_STORES,
)


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        return Fraction(x)
    return Fraction(str(x).strip())


def _normalized(masses: Sequence, what: str) -> tuple[Fraction, ...]:
    fr = tuple(_as_fraction(m) for m in masses)
    if any(m < 0 for m in fr):
        raise DistributionError(f"{what}: negative mass")
    total = sum(fr, Fraction(0))
    if abs(total - 1) > NORMALIZATION_TOL:
        raise DistributionError(f"{what}: distribution not normalized (sum={float(total):.12g})")
    if total != 1:
        fr = tuple(m / total for m in fr)
    return fr


@dataclass(frozen=True)
class EndingDistribution:
    """Probability of each price ending ``price mod modulus``."""

    mass: tuple[Fraction, ...]

    def __init__(self, mass: Sequence) -> None:
        if len(mass) not in (5, 10, 100):
            raise DistributionError(f"ending distribution needs 5, 10 or 100 residues, got {len(mass)}")
        object.__setattr__(self, "mass", _normalized(mass, "endings"))

    @property
    def modulus(self) -> int:
        return len(self.mass)

    @classmethod
    def from_dict(cls, mass: dict[int, object], modulus: int = 100) -> EndingDistribution:
        vec = [Fraction(0)] * modulus
        for r, m in mass.items():
            if not 0 <= r < modulus:
                raise DistributionError(f"ending {r} outside 0..{modulus - 1}")
            vec[r] += _as_fraction(m)
        return cls(vec)

    @classmethod
    def uniform(cls, modulus: int = 100) -> EndingDistribution:
        return cls([Fraction(1, modulus)] * modulus)

    def collapse(self, modulus: int) -> EndingDistribution:
        """Distribution of the ending modulo a divisor of the current modulus (e.g. last digit)."""
        if self.modulus % modulus:
            raise DistributionError(f"cannot collapse mod {self.modulus} to mod {modulus}")
        out = [Fraction(0)] * modulus
        for r, m in enumerate(self.mass):
            out[r % modulus] += m
        return EndingDistribution(out)

    def residue_mass(self, g: int) -> tuple[Fraction, ...]:
        """Mass on residues mod ``g`` for any ``g`` dividing the modulus, including 1."""
        if g == 1:
            return (Fraction(1),)
        return self.collapse(g).mass

    def last_digit_share(self, digit: int) -> Fraction:
        return self.residue_mass(10)[digit]

    def as_array(self) -> np.ndarray:
        return np.array([float(m) for m in self.mass])


@dataclass(frozen=True)
class BasketSizeDistribution:
    """``mass[k-1]`` is the probability of a basket with ``k`` items."""

    mass: tuple[Fraction, ...]

    def __init__(self, mass: Sequence) -> None:
        if len(mass) < 1:
            raise DistributionError("basket distribution needs K_max >= 1")
        object.__setattr__(self, "mass", _normalized(mass, "baskets"))

    @classmethod
    def from_dict(cls, mass: dict[int, object]) -> BasketSizeDistribution:
        if not mass or min(mass) < 1:
            raise DistributionError("basket sizes start at 1")
        vec = [Fraction(0)] * max(mass)
        for k, m in mass.items():
            vec[k - 1] += _as_fraction(m)
        return cls(vec)

    @classmethod
    def point(cls, k: int) -> BasketSizeDistribution:
        return cls.from_dict({k: 1})

    @property
    def k_max(self) -> int:
        # trailing zero-mass sizes do not count
        k = len(self.mass)
        while k > 1 and self.mass[k - 1] == 0:
            k -= 1
        return k

    def prob(self, k: int) -> Fraction:
        return self.mass[k - 1] if 1 <= k <= len(self.mass) else Fraction(0)

    def median(self) -> int:
        acc = Fraction(0)
        for k, m in enumerate(self.mass, start=1):
            acc += m
            if acc >= Fraction(1, 2):
                return k
        return len(self.mass)

    def mean(self) -> Fraction:
        return sum((k * m for k, m in enumerate(self.mass, start=1)), Fraction(0))

    def thresholds(self) -> np.ndarray:
        return cdf_thresholds(self.mass)


@dataclass(frozen=True)
class StoreProfile:
    store_type: StoreType
    endings: EndingDistribution
    baskets: BasketSizeDistribution
    annual_transactions: int
    revenue_share: Fraction

    def __post_init__(self) -> None:
        if self.annual_transactions <= 0:
            raise DistributionError("annual_transactions must be positive")
        share = _as_fraction(self.revenue_share)
        if not 0 <= share <= 1:
            raise DistributionError(f"revenue_share {share} outside [0, 1]")
        object.__setattr__(self, "revenue_share", share)


def validate_profile_set(profiles: Sequence[StoreProfile]) -> None:
    seen = [p.store_type for p in profiles]
    if len(set(seen)) != len(seen):
        raise DistributionError("duplicate store type in profile set")
    total = sum((p.revenue_share for p in profiles), Fraction(0))
    if abs(total - 1) > REVENUE_SHARE_TOL:
        raise DistributionError(f"revenue shares sum to {float(total):.12g}, not 1")


def sample_basket(dist: BasketSizeDistribution, rng: SplitMix64) -> int:
    """Inverse-CDF draw of one basket size, scanning sizes in ascending order."""
    return rng.choice_index(dist.thresholds()) + 1


# ---------------------------------------------------------------- profile files


def _parse_int(text: str) -> int:
    t = text.strip().replace("_", "")
    if not t.lstrip("-").isdigit():
        raise ValueError(f"not an integer: {text!r}")
    return int(t)


def load_profiles(path: str | Path) -> list[StoreProfile]:
    """Read a profile file.

    Rows are ``store_type, kind, index, mass`` with ``kind`` one of ``ending``
    or ``basket``, plus one ``store_type, meta, annual_transactions,
    revenue_share`` row per store. Masses may be decimals or ratios
    (``838/999``). Lines starting with ``#`` are ignored. Ending indices are
    agorot residues 0-99, or 0-9 if no index above 9 appears.
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"profile file not found: {path}")
    text = path.read_text(encoding="utf-8")
    return parse_profiles(text, str(path))


def parse_profiles(text: str, source: str = "<string>") -> list[StoreProfile]:
    endings: dict[StoreType, dict[int, Fraction]] = {}
    baskets: dict[StoreType, dict[int, Fraction]] = {}
    meta: dict[StoreType, tuple[int, Fraction]] = {}
    first_line: dict[StoreType, int] = {}

    for lineno, raw in enumerate(io.StringIO(text), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        cells = [c.strip() for c in next(csv.reader([line]))]
        if cells[:2] == ["store_type", "kind"]:
            continue
        if len(cells) != 4:
            raise ProfileParseError(source, lineno, "row", f"expected 4 fields, got {len(cells)}")
        try:
            st = StoreType.parse(cells[0])
        except DistributionError as exc:
            raise ProfileParseError(source, lineno, "store_type", str(exc)) from None
        first_line.setdefault(st, lineno)
        kind = cells[1].lower()
        if kind == "meta":
            try:
                n_tx = _parse_int(cells[2])
            except ValueError as exc:
                raise ProfileParseError(source, lineno, "annual_transactions", str(exc)) from None
            try:
                share = Fraction(cells[3])
            except (ValueError, ZeroDivisionError):
                raise ProfileParseError(source, lineno, "revenue_share", f"not a number: {cells[3]!r}") from None
            if st in meta:
                raise ProfileParseError(source, lineno, "meta", f"duplicate meta row for {st.value}")
            meta[st] = (n_tx, share)
            continue
        if kind not in ("ending", "basket"):
            raise ProfileParseError(source, lineno, "kind", f"expected ending|basket|meta, got {cells[1]!r}")
        try:
            idx = _parse_int(cells[2])
        except ValueError as exc:
            raise ProfileParseError(source, lineno, "index", str(exc)) from None
        try:
            mass = Fraction(cells[3])
        except (ValueError, ZeroDivisionError):
            raise ProfileParseError(source, lineno, "mass", f"not a number: {cells[3]!r}") from None
        if mass < 0:
            raise ProfileParseError(source, lineno, "mass", "negative probability")
        table = endings if kind == "ending" else baskets
        bucket = table.setdefault(st, {})
        if idx in bucket:
            raise ProfileParseError(source, lineno, "index", f"duplicate {kind} index {idx}")
        if kind == "ending" and not 0 <= idx <= 99:
            raise ProfileParseError(source, lineno, "index", f"ending {idx} outside 0..99")
        if kind == "basket" and idx < 1:
            raise ProfileParseError(source, lineno, "index", "basket sizes start at 1")
        bucket[idx] = mass

    profiles = []
    for st in sorted(first_line, key=lambda s: s.order):
        line = first_line[st]
        if st not in meta:
            raise ProfileParseError(source, line, "meta", f"missing meta row for {st.value}")
        if st not in endings:
            raise ProfileParseError(source, line, "ending", f"no ending rows for {st.value}")
        if st not in baskets:
            raise ProfileParseError(source, line, "basket", f"no basket rows for {st.value}")
        modulus = 100 if max(endings[st]) > 9 else 10
        try:
            e = EndingDistribution.from_dict(endings[st], modulus)
        except DistributionError as exc:
            raise ProfileParseError(source, line, "ending", str(exc)) from None
        try:
            b = BasketSizeDistribution.from_dict(baskets[st])
        except DistributionError as exc:
            raise ProfileParseError(source, line, "basket", str(exc)) from None
        n_tx, share = meta[st]
        try:
            profiles.append(StoreProfile(st, e, b, n_tx, share))
        except DistributionError as exc:
            raise ProfileParseError(source, line, "meta", str(exc)) from None
    if not profiles:
        raise ProfileParseError(source, 0, "row", "no profiles found")
    try:
        validate_profile_set(profiles)
    except DistributionError as exc:
        raise ProfileParseError(source, 0, "revenue_share", str(exc)) from None
    return profiles


def format_profiles(profiles: Iterable[StoreProfile]) -> str:
    buf = io.StringIO()
    buf.write("store_type,kind,index,mass\n")
    for p in profiles:
        st = p.store_type.value
        buf.write(f"{st},meta,{p.annual_transactions},{p.revenue_share}\n")
        for r, m in enumerate(p.endings.mass):
            if m:
                buf.write(f"{st},ending,{r},{m}\n")
        for k, m in enumerate(p.baskets.mass, start=1):
            if m:
                buf.write(f"{st},basket,{k},{m}\n")
    return buf.getvalue()


# ---------------------------------------------------------------- price observations


@dataclass
class PriceObservations:
    """Columnar price observations: one row per (store, product, date)."""

    store_id: np.ndarray
    store_type: np.ndarray  # object array of StoreType
    product_id: np.ndarray
    date: np.ndarray  # datetime64[D]
    price_agorot: np.ndarray  # int64
    extra: dict = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.price_agorot)

    @property
    def year(self) -> np.ndarray:
        return self.date.astype("datetime64[Y]").astype(np.int64) + 1970

    @classmethod
    def from_prices(cls, prices: Sequence[int], store_type: StoreType = StoreType.SUPERMARKETS_AND_DRUGSTORES,
                    date: str = "2013-06-01") -> PriceObservations:
        n = len(prices)
        st = np.empty(n, dtype=object)
        st[:] = store_type
        return cls(
            store_id=np.zeros(n, dtype=np.int64),
            store_type=st,
            product_id=np.arange(n, dtype=np.int64),
            date=np.full(n, np.datetime64(date, "D")),
            price_agorot=np.asarray(prices, dtype=np.int64),
        )

    def subset(self, mask: np.ndarray) -> PriceObservations:
        return PriceObservations(self.store_id[mask], self.store_type[mask], self.product_id[mask],
                                 self.date[mask], self.price_agorot[mask])

    @classmethod
    def concat(cls, parts: Sequence[PriceObservations]) -> PriceObservations:
        return cls(*(np.concatenate([getattr(p, f) for p in parts])
                     for f in ("store_id", "store_type", "product_id", "date", "price_agorot")))


OBSERVATION_COLUMNS = ("store_id", "store_type", "product_id", "date", "price_agorot")


def load_price_observations(path: str | Path) -> PriceObservations:
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"observation file not found: {path}")
    store_id, store_type, product_id, dates, prices = [], [], [], [], []
    with path.open(encoding="utf-8", newline="") as fh:
        rows = csv.reader(line for line in fh if not line.lstrip().startswith("#"))
        header = next(rows, None)
        if header is None or tuple(h.strip() for h in header) != OBSERVATION_COLUMNS:
            raise DistributionError(f"{path}: header must be {','.join(OBSERVATION_COLUMNS)}")
        for lineno, row in enumerate(rows, start=2):
            if not row:
                continue
            if len(row) != 5:
                raise DistributionError(f"{path}:{lineno}: expected 5 fields, got {len(row)}")
            try:
                store_id.append(int(row[0]))
                store_type.append(StoreType.parse(row[1]))
                product_id.append(int(row[2]))
                dates.append(dt.date.fromisoformat(row[3].strip()))
                p = int(row[4])
            except ValueError as exc:
                raise DistributionError(f"{path}:{lineno}: {exc}") from None
            if p < 0:
                raise DistributionError(f"{path}:{lineno}: negative price")
            prices.append(p)
    st = np.empty(len(store_type), dtype=object)
    st[:] = store_type
    return PriceObservations(
        np.array(store_id, dtype=np.int64), st, np.array(product_id, dtype=np.int64),
        np.array(dates, dtype="datetime64[D]"), np.array(prices, dtype=np.int64),
    )


def write_price_observations(obs: PriceObservations, path: str | Path) -> None:
    with Path(path).open("w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(OBSERVATION_COLUMNS)
        for i in range(len(obs)):
            w.writerow([int(obs.store_id[i]), obs.store_type[i].value, int(obs.product_id[i]),
                        str(obs.date[i]), int(obs.price_agorot[i])])


def empirical_ending_distribution(observations: PriceObservations | Sequence[int],
                                  modulus: int = 100) -> EndingDistribution:
    """Share of prices falling on each residue ``price mod modulus``."""
    if modulus not in (10, 100):
        raise DistributionError("modulus must be 10 or 100")
    prices = observations.price_agorot if isinstance(observations, PriceObservations) else np.asarray(observations)
    if len(prices) == 0:
        raise DistributionError("no observations")
    prices = np.asarray(prices, dtype=np.int64)
    if (prices < 0).any():
        raise DistributionError("negative price")
    counts = np.bincount(prices % modulus, minlength=modulus)
    n = int(counts.sum())
    return EndingDistribution([Fraction(int(c), n) for c in counts])


def sample_prices(dist: EndingDistribution, n: int, seed: int, whole_nis_range: tuple[int, int] = (1, 20)) -> np.ndarray:
    """Synthetic price corpus whose endings follow ``dist``; whole-NIS parts are uniform."""
    from .rng import advance, stream_states

    thresholds = cdf_thresholds(dist.mass)
    states = stream_states(seed, np.arange(n, dtype=np.uint64))
    states, u = advance(states)
    endings = np.searchsorted(thresholds, u, side="right")
    _, u2 = advance(states)
    lo, hi = whole_nis_range
    whole = lo + (u2 % (hi - lo + 1))
    return whole * 100 + endings
