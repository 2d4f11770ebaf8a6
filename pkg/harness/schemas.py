"""
Pydantic schemas for experiment configurations and report rows.
"""
from typing import Literal, Optional

from pydantic import BaseModel, Field, model_validator

MAX_ALL_ORDERS_N = 7


class ExperimentConfig(BaseModel):
    """Configuration of one fooling-error sweep."""
    source: Literal["random", "file", "formula"] = Field(default="random", description="Where the programs come from")
    n: Optional[int] = Field(default=None, ge=1, description="Input length of random programs")
    w: int = Field(default=2, ge=1, description="Width of random programs")
    count: int = Field(default=1, ge=0, description="Number of random programs")
    rng_seed: int = Field(default=0, description="Seed of the random program stream")
    program_file: Optional[str] = Field(default=None, description="Program file (source=file)")
    formula_file: Optional[str] = Field(default=None, description="Read-once formula file (source=formula)")

    orders: Literal["identity", "all", "sampled"] = Field(default="identity", description="Read orders tested per program")
    order_count: int = Field(default=1, ge=1, description="Number of sampled orders")
    order_seed: Optional[int] = Field(default=None, description="Seed of the sampled orders")

    variant: Literal["exact", "star"] = Field(default="exact", description="Generator variant")
    k: Optional[int] = Field(default=None, ge=1, description="Independence parameter override")
    r: Optional[int] = Field(default=None, ge=0, description="Recursion depth override")
    delta: Optional[float] = Field(default=None, gt=0, lt=1, description="Bias override (star)")
    gamma: Optional[float] = Field(default=None, gt=0, le=1, description="Almost-independence override (star)")
    epsilon: Optional[float] = Field(default=None, gt=0, lt=1, description="Target error for derived star parameters")
    mass_mode: Literal["trivial", "chrt"] = Field(default="trivial", description="Level-mass bound used by bound columns")

    measurement: Literal["exact_dp", "exact_seeds", "sampled"] = Field(default="exact_dp", description="How errors are measured")
    samples: int = Field(default=10000, ge=2, description="Monte Carlo samples per row")
    sample_seed: Optional[int] = Field(default=None, description="Seed of the Monte Carlo streams")

    out: str = Field(default="results/report.csv", description="CSV path; the JSON sidecar sits next to it")
    workers: int = Field(default=4, ge=1, description="Worker threads")

    @model_validator(mode="after")
    def check_consistency(self):
        if self.source == "random" and self.count > 0 and self.n is None:
            raise ValueError("random programs need n")
        if self.source == "file" and not self.program_file:
            raise ValueError("source=file needs program_file")
        if self.source == "formula" and not self.formula_file:
            raise ValueError("source=formula needs formula_file")
        if self.orders == "sampled" and self.order_seed is None:
            raise ValueError("sampled orders need an explicit order_seed")
        if self.measurement == "sampled" and self.sample_seed is None:
            raise ValueError("sampled measurement needs an explicit sample_seed")
        if self.variant == "star" and self.epsilon is None and None in (self.k, self.r, self.delta, self.gamma):
            raise ValueError("star generator needs epsilon or all of k, r, delta, gamma")
        return self


class ErrorRow(BaseModel):
    """One (program, order, generator) measurement."""
    row: int
    program: str
    order: str
    spec: str
    variant: str
    mode: str
    mass_mode: str
    measurement: str
    seed_bits: int
    frobenius: Optional[float] = None
    scalar: Optional[float] = None
    half_width: Optional[float] = None
    bound: float
    vacuous: bool
    passed: bool
    skipped: bool = False
    note: str = ""
    config_hash: str


REPORT_COLUMNS = list(ErrorRow.model_fields)
