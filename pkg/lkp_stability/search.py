"""
Counterexample search for the S_r and L^p operators.

Negative-rooted inputs come from the seeded random corpus and from structured
families configured in the search section of the config. Every input is
certified first; an operator output that fails certification becomes a
SearchRecord appended to a JSONL file.
"""

import asyncio
import json
import logging
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from datetime import datetime, timezone

from .errors import InvalidParameter, RecordMismatch, ZeroPolynomial
from .exactpoly import ExactPolynomial, TaylorData, to_rational
from .lpclass import MAX_SEED, corpus_member, jensen_polynomial, member_seed
from .operators import OperatorSpec
from .rootcert import RootCertificate, certify_all_real_negative

logger = logging.getLogger("lkp_stability")

BUDGET_TYPES = ("count", "seconds")
STRATEGIES = ("random", "structured")


def setup_search_log(log_file):
    """Dedicated search logger writing every candidate to a file and progress to the console"""
    search_logger = logging.getLogger("lkp_search")
    search_logger.setLevel(logging.DEBUG)
    search_logger.propagate = False
    if search_logger.handlers:
        return search_logger

    formatter = logging.Formatter('%(asctime)s - %(levelname)s - %(message)s')
    try:
        os.makedirs(os.path.dirname(log_file) or ".", exist_ok=True)
        file_handler = logging.FileHandler(log_file)
        file_handler.setLevel(logging.DEBUG)
        file_handler.setFormatter(formatter)
        search_logger.addHandler(file_handler)
    except OSError as e:
        logger.warning(f"Could not open search log {log_file}: {str(e)}")

    stdout_handler = logging.StreamHandler()
    stdout_handler.setLevel(logging.INFO)
    stdout_handler.setFormatter(formatter)
    search_logger.addHandler(stdout_handler)
    return search_logger


@dataclass(frozen=True)
class Candidate:
    index: int
    source: str
    polynomial: ExactPolynomial
    seed: int


@dataclass(frozen=True)
class SearchRecord:
    """A negative-rooted input whose operator output is not negative-rooted"""

    operator: OperatorSpec
    input: ExactPolynomial
    certificate: RootCertificate
    seed: int
    found_at: str
    source: str = ""

    def to_dict(self):
        return {
            "operator": self.operator.to_dict(),
            "input": self.input.to_dict(),
            "certificate": self.certificate.to_dict(),
            "seed": self.seed,
            "source": self.source,
            "found_at": self.found_at,
        }

    def to_json(self):
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data):
        try:
            return cls(
                operator=OperatorSpec.from_dict(data["operator"]),
                input=ExactPolynomial.from_dict(data["input"]),
                certificate=RootCertificate.from_dict(data["certificate"]),
                seed=int(data["seed"]),
                found_at=data.get("found_at", ""),
                source=data.get("source", ""),
            )
        except (KeyError, TypeError, ValueError) as e:
            raise RecordMismatch(f"malformed search record: {str(e)}") from e

    def revalidate(self):
        """Re-run both certifications; raise RecordMismatch unless the record reproduces exactly"""
        input_certificate = certify_all_real_negative(self.input)
        if not input_certificate.all_real_negative:
            raise RecordMismatch(f"record input is {input_certificate.verdict.value}, not AllRealNegative")
        certificate = certify_all_real_negative(self.operator.apply(self.input))
        if certificate.to_dict() != self.certificate.to_dict():
            raise RecordMismatch(f"record certificate does not reproduce for {self.operator.label()}")
        if certificate.all_real_negative:
            raise RecordMismatch("record output certifies AllRealNegative")


def check_candidate(spec, polynomial):
    """Certify the input, then the operator output; runs in executor workers"""
    input_certificate = certify_all_real_negative(polynomial)
    if not input_certificate.all_real_negative:
        return f"input-{input_certificate.verdict.value}", None
    try:
        output = spec.apply(polynomial)
        if output.is_zero():
            return "zero-output", None
        return "checked", certify_all_real_negative(output)
    except ZeroPolynomial:
        return "zero-output", None


def _binomial_products(grid):
    """(1 + x)^a (1 + b x)^c over the configured grid"""
    one_plus_x = ExactPolynomial([1, 1])
    for a in grid.get("a", []):
        for b in grid.get("b", []):
            b = to_rational(b)
            if b <= 0:
                continue
            for c in grid.get("c", []):
                yield f"(1+x)^{a}(1+{b}x)^{c}", one_plus_x ** int(a) * ExactPolynomial([1, b]) ** int(c)


def _jensen_family(grid):
    """Jensen polynomials of LP+ Taylor data, plain and times (1 + rho x)"""
    ns = [int(n) for n in grid.get("n", [])]
    bases = []
    if grid.get("exponential", False):
        bases.append(("exp", TaylorData.exponential))
    for b in grid.get("reciprocal_pochhammer", []):
        bases.append((f"0F1(;{b})", lambda length, b=b: TaylorData.reciprocal_pochhammer(b, length)))
    for label, make in bases:
        for n in ns:
            g = jensen_polynomial(make(n + 1), n)
            yield f"g_{n}[{label}]", g
            for rho in grid.get("perturb", []):
                rho = to_rational(rho)
                if rho > 0:
                    yield f"g_{n}[{label}](1+{rho}x)", g * ExactPolynomial([1, rho])


def structured_candidates(families):
    yield from _binomial_products(families.get("binomial_products", {}))
    yield from _jensen_family(families.get("jensen", {}))


class CounterexampleSearch:
    """Seeded search over negative-rooted inputs for one operator"""

    def __init__(self, spec, seed, budget, budget_type="count", strategy="random", config=None):
        if spec.kind not in ("Sr", "Lkp"):
            raise InvalidParameter(f"search supports Sr and Lkp operators, got {spec.kind}")
        if not 0 <= seed < MAX_SEED:
            raise InvalidParameter(f"seed must be an unsigned 64-bit integer, got {seed}")
        if budget <= 0:
            raise InvalidParameter(f"budget must be positive, got {budget}")
        if budget_type not in BUDGET_TYPES:
            raise InvalidParameter(f"unknown budget type '{budget_type}'")
        if strategy not in STRATEGIES:
            raise InvalidParameter(f"unknown search strategy '{strategy}'")
        settings = (config or {}).get("search", {})
        self.spec = spec
        self.seed = seed
        self.budget = budget
        self.budget_type = budget_type
        self.strategy = strategy
        self.workers = max(1, int(settings.get("workers", 1)))
        self.rho_bound = int(settings.get("rho_bound", 20))
        self.degree_range = tuple(settings.get("degree_range", (1, 12)))
        self.families = settings.get("families", {})
        self.records = []
        self.checked = 0
        self.skipped = 0
        self.record_callbacks = []
        self.search_logger = logging.getLogger("lkp_search")

    def add_record_callback(self, callback):
        """Add a callback to be called with every new record"""
        if callback not in self.record_callbacks:
            self.record_callbacks.append(callback)

    def remove_record_callback(self, callback):
        """Remove a record callback"""
        if callback in self.record_callbacks:
            self.record_callbacks.remove(callback)

    def candidates(self):
        """Structured families first when requested, then the random corpus without end"""
        index = 0
        if self.strategy == "structured":
            for source, polynomial in structured_candidates(self.families):
                yield Candidate(index, source, polynomial, self.seed)
                index += 1
        corpus_index = 0
        while True:
            member = corpus_member(self.seed, corpus_index, self.degree_range, self.rho_bound)
            yield Candidate(index, f"corpus[{corpus_index}]", member.expand(),
                            member_seed(self.seed, corpus_index))
            index += 1
            corpus_index += 1

    def _handle(self, candidate, status, certificate):
        if certificate is None:
            self.skipped += 1
            self.search_logger.warning(f"Skipping {candidate.source}: {status}")
            return
        self.checked += 1
        self.search_logger.debug(f"{candidate.source}: {certificate.verdict.value}")
        if certificate.all_real_negative:
            return
        record = SearchRecord(
            operator=self.spec,
            input=candidate.polynomial,
            certificate=certificate,
            seed=candidate.seed,
            found_at=datetime.now(timezone.utc).isoformat(),
            source=candidate.source,
        )
        self.records.append(record)
        self.search_logger.info(f"Counterexample for {self.spec.label()} at {candidate.source}: "
                                f"{certificate.verdict.value}")
        for callback in self.record_callbacks:
            try:
                callback(record)
            except Exception as e:
                logger.error(f"Error in record callback: {str(e)}")

    async def run(self):
        """Run to budget; results are handled in candidate order whatever the worker count"""
        loop = asyncio.get_event_loop()
        executor = ProcessPoolExecutor(max_workers=self.workers) if self.workers > 1 else None
        batch_size = self.workers * 4
        deadline = time.monotonic() + self.budget if self.budget_type == "seconds" else None
        source = self.candidates()
        processed = 0
        self.search_logger.info(f"Searching {self.spec.label()} with seed {self.seed}, "
                                f"budget {self.budget} {self.budget_type}, strategy {self.strategy}")
        try:
            while True:
                if deadline is None:
                    size = min(batch_size, self.budget - processed)
                    if size <= 0:
                        break
                elif time.monotonic() >= deadline:
                    break
                else:
                    size = batch_size
                batch = [next(source) for _ in range(size)]
                results = await asyncio.gather(*[
                    loop.run_in_executor(executor, check_candidate, self.spec, c.polynomial) for c in batch
                ])
                for candidate, (status, certificate) in zip(batch, results):
                    self._handle(candidate, status, certificate)
                processed += size
        finally:
            if executor is not None:
                executor.shutdown()
        self.search_logger.info(f"Search finished: {processed} candidates, {self.checked} checked, "
                                f"{self.skipped} skipped, {len(self.records)} records")
        return self.records


def counterexample_search(spec, seed, budget, budget_type="count", strategy="random", config=None):
    """Synchronous entry point around CounterexampleSearch.run"""
    return asyncio.run(CounterexampleSearch(spec, seed, budget, budget_type, strategy, config).run())


class RecordWriter:
    """Append-only JSONL writer; the only place records touch the disk"""

    def __init__(self, path):
        self.path = path

    def __call__(self, record):
        self.append(record)

    def append(self, record):
        directory = os.path.dirname(self.path)
        if directory:
            os.makedirs(directory, exist_ok=True)
        with open(self.path, "a") as f:
            f.write(record.to_json() + "\n")


def load_records(path, revalidate=True):
    """Read a JSONL record file, re-validating every record"""
    records = []
    with open(path, "r") as f:
        for line_number, line in enumerate(f, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                record = SearchRecord.from_dict(json.loads(line))
                if revalidate:
                    record.revalidate()
            except json.JSONDecodeError as e:
                raise RecordMismatch(f"{path}:{line_number}: invalid JSON: {str(e)}") from e
            except RecordMismatch as e:
                raise RecordMismatch(f"{path}:{line_number}: {str(e)}") from e
            records.append(record)
    return records
