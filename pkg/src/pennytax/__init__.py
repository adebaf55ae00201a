"""Cash-rounding tax, left-digit bias and inattention-penalty toolkit."""

from .money import Money, RoundingRegime, round_bill, rounding_delta

__version__ = "0.1.0"

__all__ = ["Money", "RoundingRegime", "round_bill", "rounding_delta", "__version__"]
