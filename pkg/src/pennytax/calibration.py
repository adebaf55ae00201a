"""Published inputs and reference values for the Israeli case (2013 FMCG market).

Regression coefficients listed here come from confidential scanner data and
are kept only as reference inputs for the theta arithmetic; the toolkit never
claims to re-estimate them.
"""

from __future__ import annotations

from fractions import Fraction
from importlib import resources
from pathlib import Path

from .analytics import PennyStats, units_from_thousands
from .distributions import StoreProfile, StoreType, load_profiles
from .scenario import StoreInputs

SM, SG, CV = StoreType.SUPERMARKETS_AND_DRUGSTORES, StoreType.SMALL_GROCERIES, StoreType.CONVENIENCE_STORES
STORES = (SM, SG, CV)


def calibration_profiles_path() -> Path:
    return Path(str(resources.files("pennytax") / "data" / "calibration_profiles.csv"))


def calibration_profiles() -> list[StoreProfile]:
    return load_profiles(calibration_profiles_path())


# stated ending/basket facts the calibration file was built from
STATED_NINE_ENDING = {SM: Fraction("0.611"), SG: Fraction("0.191"), CV: Fraction("0.342")}
STATED_ZERO_ENDING = {SM: Fraction("0.183"), SG: Fraction("0.758"), CV: Fraction("0.641")}
STATED_MEDIAN_BASKET = {SM: 6, SG: 3, CV: 1}
STATED_SINGLETON_SHARE = {SM: Fraction("0.136"), CV: Fraction("0.710")}
STATED_SM_SHARE_15_PLUS = Fraction("0.25")

# 9-ending share before the regulation in the CPI sample (ending analytics)
NINE_ENDING_SHARE_PRE2014 = {SM: Fraction("0.632"), SG: Fraction("0.199"), CV: Fraction("0.419")}

# ---- rounding tax, national aggregation
TABLE1 = {
    "avg_tax_nis": {SM: "0.0075", SG: "0.0058", CV: "0.0048"},
    "revenue_pct": {SM: "83.80", SG: "15.30", CV: "0.80"},
    "transactions_thousands": {SM: 188_856, SG: 98_822, CV: 7_856},
    "equal_shares": {SM: 353_962, SG: 143_836, CV: 9_482},
    "equal_total": 507_280,
    "max_rows": {SM: 150_371, SG: 575_343, CV: 37_926},
    "max_total": 763_641,
    "min_rows": {SM: 422_390, SG: 0, CV: 0},
    "min_total": 422_390,
    "max_sm_share": Fraction("0.106"),
    "min_sm_share": Fraction("0.298"),
    "cash_share": Fraction("0.25"),
}


def table1_inputs(normalize_revenue: bool = True) -> list[StoreInputs]:
    """Column 1-3 inputs. Printed revenue shares add to 99.9%; by default they are rescaled to sum to one."""
    pct = {st: Fraction(TABLE1["revenue_pct"][st]) for st in STORES}
    total = sum(pct.values()) if normalize_revenue else Fraction(100)
    return [
        StoreInputs(st, Fraction(TABLE1["avg_tax_nis"][st]) * 100,
                    TABLE1["transactions_thousands"][st] * 1000, pct[st] / total)
        for st in STORES
    ]


# ---- left-digit bias regressions: (beta90, beta00, epsilon, mean price NIS, printed theta, observations)
TABLE2 = {
    1: (0.031, 0.020, -0.650, 12.700, 0.220, 994_459),
    2: (0.038, 0.011, -0.670, 7.560, 0.300, 260_888),
    3: (0.068, 0.031, -0.680, 12.610, 0.690, 6_947_640),
    4: (0.081, 0.075, -0.700, 12.750, 0.110, 908_306),
}
TABLE_A1 = {
    1: (0.086, 0.072, -0.86, 12.73, 0.21, 664_856),
    2: (0.070, 0.0578, -1.04, 7.53, 0.37, 293_417),
    3: (0.11, 0.072, -0.79, 12.63, 0.60, 4_788_774),
}
# 90-ending premium in log price changes, by fixed-effect set (coefficient, SE); 241,736 changes
TABLE_B1 = {
    ("year", "month"): (0.03, 0.001),
    ("year", "month", "product"): (0.01, 0.001),
    ("year", "month", "product", "store"): (0.01, 0.001),
}

# ---- inattention penalty: agorot per price and units sold (thousands)
_VOL_T3 = {SM: "2,685,251.3", SG: "845,403.2", CV: "57,628.3"}
_VOL_ROUNDED = {SM: "2,685,251", SG: "845,403", CV: "57,628"}

PENALTY_TABLES = {
    "table3": {
        "after_year": 2021, "before_year": 2013, "price_cap": 2000,
        "after": {SM: "77.9", SG: "59.8", CV: "49.5"},
        "before": {SM: "69.3", SG: "55.5", CV: "46.2"},
        "volumes": _VOL_T3,
        "totals": {SM: 230_931_612, SG: 36_352_338, CV: 1_901_734},
        "grand_total": 269_185_684,
    },
    "c1": {
        "after_year": 2021, "before_year": 2012, "price_cap": 2000,
        "after": {SM: "77.9", SG: "59.8", CV: "49.5"},
        "before": {SM: "74.8", SG: "56.2", CV: "56.0"},
        "volumes": _VOL_T3,
        "printed_volumes": _VOL_ROUNDED,
        "totals": {SM: 84_114_987, SG: 30_370_882, CV: -3_752_697},
        "grand_total": 110_733_171,
    },
    "c2": {
        "after_year": 2021, "before_year": 2013, "price_cap": None,
        "after": {SM: "73.5", SG: "58.3", CV: "52.4"},
        "before": {SM: "63", SG: "55.6", CV: "48.6"},
        "volumes": _VOL_T3,
        "printed_volumes": _VOL_ROUNDED,
        "totals": {SM: 281_951_387, SG: 22_825_886, CV: 2_189_875},
        "grand_total": 306_967_148,
    },
}


def penalty_inputs(name: str) -> tuple[PennyStats, PennyStats, dict[StoreType, int]]:
    t = PENALTY_TABLES[name]
    after = PennyStats.published(t["after"], t["price_cap"])
    before = PennyStats.published(t["before"], t["price_cap"])
    volumes = {st: units_from_thousands(v) for st, v in t["volumes"].items()}
    return after, before, volumes
