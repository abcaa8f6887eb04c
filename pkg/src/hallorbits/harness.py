"""Corpus-driven batch verification.

A corpus is a JSON list of group entries.  For every entry, prime set and
requested check the harness produces one :class:`VerificationRecord`; the
records are sorted deterministically and written as JSON lines plus a CSV
summary.  Wall-clock timings go to a separate file so the two report files
are byte-identical across runs with the same corpus, config and seed.
"""
from __future__ import annotations

import csv
import io
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from sympy import primefactors

from .characters import DixonError, character_degrees
from .config import CapExceeded, reset_caps, set_caps
from .finite_field import parse_field
from .linear import MatrixGroup, ModuleSpace, check_hypotheses
from .orbits import pair_exists, qualifying_orbits, regular_orbit_small_centralizer, verify_witness
from .perm import as_permutation
from .permgroup import PermGroup
from .pisets import PiSet, nonempty_subsets, pi_part
from .radicals import HallSearchExhausted, NotPiSeparable, hall_subgroup, o_pi, o_pi_prime_pi

CHECKS = ("main-inequality", "orbit-theorem", "pair-exists", "small-centralizer")
MODULE_CHECKS = CHECKS[1:]

HOLDS = "HOLDS"
VIOLATION = "VIOLATION"
SKIPPED = "SKIPPED-HYPOTHESIS"
NOT_APPLICABLE = "NOT-APPLICABLE"
MISMATCH = "EXPECTATION-MISMATCH"

EXIT_CLEAN, EXIT_VIOLATION, EXIT_CONFIG, EXIT_CORPUS = 0, 1, 2, 3


class CorpusError(ValueError):
    """A corpus file or one of its entries is malformed."""


class ConfigError(ValueError):
    """A run configuration is malformed."""


def default_corpus_path() -> Path:
    return Path(str(resources.files("hallorbits") / "data" / "corpus.json"))


# -- corpus ------------------------------------------------------------------------

@dataclass
class CorpusEntry:
    name: str
    kind: str
    raw: dict = field(repr=False)
    pi_sets: list[PiSet] | None = None
    expectations: dict = field(default_factory=dict)
    description: str = ""

    def build(self):
        """A PermGroup for ``perm`` entries, a MatrixGroup for ``mat`` entries."""
        return _build(self.name, self.kind, self.raw)

    def perm_group(self) -> PermGroup:
        G = self.build()
        return G.perm_group if isinstance(G, MatrixGroup) else G


def _ctx(where: str, problem: str) -> CorpusError:
    return CorpusError(f"{where}: {problem}")


def _build(name: str, kind: str, raw: dict):
    where = f"entry {name!r}"
    if kind == "perm":
        if "degree" not in raw:
            raise _ctx(where, "missing field 'degree'")
        n = raw["degree"]
        if not isinstance(n, int) or n < 1:
            raise _ctx(where, f"field 'degree' must be a positive integer, got {n!r}")
        gens = []
        for i, g in enumerate(raw.get("gens", [])):
            try:
                gens.append(as_permutation(g, n))
            except (ValueError, TypeError) as exc:
                raise _ctx(f"{where}, gens[{i}]", str(exc)) from None
        return PermGroup(gens, n=n, name=name)

    if "components" in raw:
        comps_raw = raw["components"]
        if not isinstance(comps_raw, list) or not comps_raw:
            raise _ctx(where, "field 'components' must be a nonempty list")
    else:
        comps_raw = [{"field": raw.get("field"), "dim": raw.get("dim")}]
    comps = []
    for c, item in enumerate(comps_raw):
        try:
            F = parse_field(item["field"])
            d = int(item["dim"])
        except (KeyError, TypeError, ValueError) as exc:
            raise _ctx(f"{where}, components[{c}]", f"needs 'field' like \"GF(3)\" and integer 'dim' ({exc})") from None
        comps.append((F, d))
    space = ModuleSpace(tuple(comps))
    gens = []
    for i, g in enumerate(raw.get("gens", [])):
        blocks = [g] if "components" not in raw else g
        if not isinstance(blocks, list) or len(blocks) != len(comps):
            raise _ctx(f"{where}, gens[{i}]", f"expected {len(comps)} blocks")
        shaped = []
        for c, ((F, d), block) in enumerate(zip(comps, blocks)):
            if not isinstance(block, list) or len(block) != d * d:
                raise _ctx(f"{where}, gens[{i}][{c}]", f"expected {d * d} row-major entries for a {d}x{d} block")
            shaped.append([block[r * d:(r + 1) * d] for r in range(d)])
        gens.append(tuple(shaped))
    try:
        M = MatrixGroup(space, gens, name=name)
        if "source" in raw:
            src = raw["source"]
            M = M.with_source([as_permutation(s, src["degree"]) for s in src["gens"]], src["degree"])
    except (ValueError, TypeError, KeyError) as exc:
        raise _ctx(where, str(exc)) from None
    return M


def _parse_entry(i: int, item) -> CorpusEntry:
    where = f"entry #{i}"
    if not isinstance(item, dict):
        raise _ctx(where, "expected a JSON object")
    name = item.get("name")
    if not isinstance(name, str) or not name:
        raise _ctx(where, "missing or empty field 'name'")
    where = f"entry #{i} ({name!r})"
    kind = item.get("kind")
    if kind not in ("perm", "mat"):
        raise _ctx(where, f"field 'kind' must be 'perm' or 'mat', got {kind!r}")
    if not isinstance(item.get("gens", []), list):
        raise _ctx(where, "field 'gens' must be a list")
    pi_sets = None
    if "pi_sets" in item:
        try:
            pi_sets = [PiSet.of(ps) for ps in item["pi_sets"]]
        except (ValueError, TypeError) as exc:
            raise _ctx(where, f"bad 'pi_sets': {exc}") from None
    exp = item.get("expectations", {})
    if not isinstance(exp, dict):
        raise _ctx(where, "field 'expectations' must be an object")
    return CorpusEntry(name, kind, item, pi_sets, exp, item.get("description", ""))


def load_corpus(path=None, build: bool = True, log=None) -> list[CorpusEntry]:
    """Parse a corpus file; with ``build`` every group is constructed once."""
    path = Path(path) if path is not None else default_corpus_path()
    try:
        text = path.read_text()
    except OSError as exc:
        raise CorpusError(f"{path}: {exc.strerror or exc}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CorpusError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(data, list):
        raise CorpusError(f"{path}: top level must be a list of entries")
    entries, seen = [], set()
    for i, item in enumerate(data):
        e = _parse_entry(i, item)
        if e.name in seen:
            raise CorpusError(f"{path}: duplicate entry name {e.name!r}")
        seen.add(e.name)
        if build:
            try:
                order = e.perm_group().order
            except CorpusError as exc:
                raise CorpusError(f"{path}: {exc}") from None
            except (ValueError, TypeError, CapExceeded) as exc:
                raise CorpusError(f"{path}: entry {e.name!r}: {exc}") from None
            if log:
                log(f"{e.name}: order {order}")
        entries.append(e)
    return entries


# -- records -----------------------------------------------------------------------

@dataclass
class VerificationRecord:
    entry: str
    pi: PiSet
    check: str
    status: str
    holds: bool | None
    seed: int
    details: dict = field(default_factory=dict)
    diff: dict | None = None
    timing: float = field(default=0.0, compare=False)

    def to_dict(self) -> dict:
        out = {
            "entry": self.entry,
            "pi": list(self.pi.primes),
            "check": self.check,
            "status": self.status,
            "holds": self.holds,
            "seed": self.seed,
            "details": self.details,
        }
        if self.diff is not None:
            out["diff"] = self.diff
        return out

    def sort_key(self, order: dict) -> tuple:
        return (order.get(self.entry, len(order)), self.entry, len(self.pi), self.pi.primes, CHECKS.index(self.check))


def _gens(G: PermGroup) -> list[str]:
    return [str(g) for g in G.generators]


def verify_main_inequality(G, pi, seed: int = 0, name: str | None = None) -> VerificationRecord:
    """|G : O_{pi'pi}(G)|_pi <= b(H)^2 for a Hall pi-subgroup H, exactly."""
    pi = PiSet.of(pi)
    P = G.perm_group if isinstance(G, MatrixGroup) else G
    label = name or P.name or "G"
    if not P.is_pi_separable(pi):
        return VerificationRecord(label, pi, "main-inequality", SKIPPED, None, seed,
                                  {"reason": "not pi-separable", "order": P.order})
    K = o_pi_prime_pi(P, pi)
    lhs = pi_part(P.order // K.order, pi)
    H = hall_subgroup(P, pi, seed=seed, name=label)
    degs = character_degrees(H, seed=seed)
    rhs = degs.b ** 2
    details = {
        "order": P.order,
        "solvable": P.is_solvable(),
        "o_pi_prime_pi_order": K.order,
        "lhs": lhs,
        "rhs": rhs,
        "hall_order": H.order,
        "hall_generators": _gens(H),
        "hall_degrees": list(degs.degrees),
        "dixon_prime": degs.ell,
        "hall_exponent": degs.exponent,
    }
    holds = lhs <= rhs
    return VerificationRecord(label, pi, "main-inequality", HOLDS if holds else VIOLATION, holds, seed, details)


def _orbit_record(M: MatrixGroup, pi: PiSet, seed: int, name: str, unit: str, mode: str) -> VerificationRecord:
    P = M.perm_group
    hyp = check_hypotheses(M, pi, mode)
    if not hyp.pi_separable:
        return VerificationRecord(name, pi, "orbit-theorem", SKIPPED, None, seed,
                                  {"reason": "not pi-separable", "hypothesis": hyp.to_dict()})
    H = hall_subgroup(P, pi, seed=seed, name=name)
    rep_h = qualifying_orbits(M, H, pi, unit="H", mode=mode, hypothesis=hyp)
    rep_g = qualifying_orbits(M, H, pi, unit="G", mode=mode, hypothesis=hyp)
    chosen = rep_h if unit == "H" else rep_g
    O = o_pi(P, pi)
    bad = [w for w in chosen.witnesses if not verify_witness(M, H, pi, *w, O=O)]
    details = {
        "unit": unit,
        "qualifying": chosen.qualifying,
        "total_orbits": chosen.total_orbits,
        "threshold": chosen.threshold,
        "qualifying_H": rep_h.qualifying,
        "total_orbits_H": rep_h.total_orbits,
        "qualifying_G": rep_g.qualifying,
        "total_orbits_G": rep_g.total_orbits,
        "hall_order": H.order,
        "hall_generators": _gens(H),
        "o_pi_order": chosen.o_pi_order,
        "witnesses": chosen.to_dict()["witnesses"],
        "hypothesis": hyp.to_dict(),
    }
    if bad:
        details["unverified_witnesses"] = [list(w) for w in bad]
        return VerificationRecord(name, pi, "orbit-theorem", VIOLATION, False, seed, details)
    if not (hyp.eligible and hyp.solvable and hyp.nontrivial):
        details["reason"] = "hypotheses not met"
        return VerificationRecord(name, pi, "orbit-theorem", SKIPPED, None, seed, details)
    holds = chosen.threshold_met
    return VerificationRecord(name, pi, "orbit-theorem", HOLDS if holds else VIOLATION, holds, seed, details)


def _pair_record(M: MatrixGroup, pi: PiSet, seed: int, name: str, mode: str) -> VerificationRecord:
    P = M.perm_group
    hyp = check_hypotheses(M, pi, mode)
    if not hyp.pi_separable:
        return VerificationRecord(name, pi, "pair-exists", SKIPPED, None, seed,
                                  {"reason": "not pi-separable", "hypothesis": hyp.to_dict()})
    H = hall_subgroup(P, pi, seed=seed, name=name)
    res = pair_exists(M, H, pi, mode=mode, hypothesis=hyp)
    details = {
        "witness": list(res.witness) if res.found else None,
        "hall_order": H.order,
        "hall_generators": _gens(H),
        "hypothesis": hyp.to_dict(),
    }
    if res.found:
        details["witness_coords"] = [M.space.decode(v) for v in res.witness]
    if not hyp.eligible:
        details["reason"] = "hypotheses not met"
        return VerificationRecord(name, pi, "pair-exists", SKIPPED, None, seed, details)
    holds = res.found
    return VerificationRecord(name, pi, "pair-exists", HOLDS if holds else VIOLATION, holds, seed, details)


def _lemma_record(M: MatrixGroup, pi: PiSet, seed: int, name: str) -> VerificationRecord:
    res = regular_orbit_small_centralizer(M)
    details = {
        "regular_orbit_exists": res.regular_orbit_exists,
        "regular_pair": list(res.regular_pair) if res.regular_pair else None,
        "witness": res.witness,
        "centralizer_order": res.centralizer_order,
        "order": res.group_order,
    }
    holds = res.implication_holds
    return VerificationRecord(name, pi, "small-centralizer", HOLDS if holds else VIOLATION, holds, seed, details)


def _lookup(details: dict, key: str):
    cur = details
    for part in key.split("."):
        if not isinstance(cur, dict) or part not in cur:
            return None
        cur = cur[part]
    return cur


def apply_expectations(rec: VerificationRecord, expectations: dict) -> VerificationRecord:
    """Compare a record with ``expectations[check][pi]``; any difference is a violation."""
    wanted = expectations.get(rec.check, {}).get(str(rec.pi))
    if not wanted:
        return rec
    diff = {}
    for key, value in sorted(wanted.items()):
        actual = rec.holds if key == "holds" else _lookup(rec.details, key)
        if actual != value:
            diff[key] = {"expected": value, "actual": actual}
    if diff:
        rec.status, rec.holds, rec.diff = MISMATCH, False, diff
    return rec


# -- runs --------------------------------------------------------------------------

@dataclass
class RunConfig:
    corpus: str | None = None
    checks: tuple[str, ...] = CHECKS
    pi_policy: str = "all"
    unit: str = "H"
    mode: str = "strict"
    seed: int = 0
    jobs: int = 1
    out: str = "hallorbits-report"
    entries: tuple[str, ...] = ()
    caps: dict = field(default_factory=dict)

    def validate(self) -> "RunConfig":
        bad = [c for c in self.checks if c not in CHECKS]
        if bad or not self.checks:
            raise ConfigError(f"unknown or empty checks {bad}; choose from {list(CHECKS)}")
        if self.pi_policy not in ("all", "explicit"):
            raise ConfigError(f"pi_policy must be 'all' or 'explicit', got {self.pi_policy!r}")
        if self.unit not in ("H", "G"):
            raise ConfigError(f"unit must be H or G, got {self.unit!r}")
        if self.mode not in ("strict", "lenient"):
            raise ConfigError(f"mode must be strict or lenient, got {self.mode!r}")
        if not isinstance(self.seed, int) or not isinstance(self.jobs, int) or self.jobs < 1:
            raise ConfigError("seed must be an integer and jobs a positive integer")
        try:
            set_caps(**{k: int(v) for k, v in self.caps.items()})
        except (ValueError, TypeError) as exc:
            raise ConfigError(str(exc)) from None
        finally:
            reset_caps()
        self.checks = tuple(self.checks)
        self.entries = tuple(self.entries)
        return self

    @classmethod
    def from_file(cls, path, **overrides) -> "RunConfig":
        try:
            data = json.loads(Path(path).read_text())
        except OSError as exc:
            raise ConfigError(f"{path}: {exc.strerror or exc}") from None
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: line {exc.lineno}: {exc.msg}") from None
        if not isinstance(data, dict):
            raise ConfigError(f"{path}: expected a JSON object")
        known = set(cls.__dataclass_fields__)
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"{path}: unknown key(s) {sorted(unknown)}")
        data.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**data).validate()


def pi_sets_for(entry: CorpusEntry, order: int, policy: str) -> list[PiSet]:
    """Prime sets to test: every nonempty subset, or the explicit list closed under complement."""
    primes = primefactors(order)
    if policy == "explicit" and entry.pi_sets is not None:
        sets = set(entry.pi_sets)
        sets |= {ps.complement(order) for ps in entry.pi_sets if ps.complement(order).primes}
        return sorted(sets, key=lambda s: (len(s), s.primes))
    return nonempty_subsets(primes)


def check_entry(entry: CorpusEntry, cfg: RunConfig) -> list[VerificationRecord]:
    """Every requested record for one entry, expectations applied."""
    G = entry.build()
    P = G.perm_group if isinstance(G, MatrixGroup) else G
    records = []
    lemma = None
    for pi in pi_sets_for(entry, P.order, cfg.pi_policy):
        for check in cfg.checks:
            t0 = time.perf_counter()
            if check == "main-inequality":
                rec = verify_main_inequality(P, pi, seed=cfg.seed, name=entry.name)
            elif not isinstance(G, MatrixGroup):
                rec = VerificationRecord(entry.name, pi, check, NOT_APPLICABLE, None, cfg.seed,
                                         {"reason": "permutation entry has no module"})
            elif check == "orbit-theorem":
                rec = _orbit_record(G, pi, cfg.seed, entry.name, cfg.unit, cfg.mode)
            elif check == "pair-exists":
                rec = _pair_record(G, pi, cfg.seed, entry.name, cfg.mode)
            else:
                if lemma is None:
                    lemma = _lemma_record(G, pi, cfg.seed, entry.name)
                rec = VerificationRecord(entry.name, pi, check, lemma.status, lemma.holds, cfg.seed, dict(lemma.details))
            rec.timing = time.perf_counter() - t0
            records.append(apply_expectations(rec, entry.expectations))
    return records


class EntryFailure(RuntimeError):
    pass


def _worker(args):
    entry, cfg = args
    reset_caps()
    set_caps(**{k: int(v) for k, v in cfg.caps.items()})
    try:
        return check_entry(entry, cfg)
    except (CorpusError, CapExceeded, DixonError, HallSearchExhausted, NotPiSeparable, ValueError) as exc:
        raise EntryFailure(f"entry {entry.name!r}: {type(exc).__name__}: {exc}") from None


@dataclass
class RunResult:
    records: list[VerificationRecord]
    exit_code: int
    report_path: Path | None = None
    summary_path: Path | None = None
    timings_path: Path | None = None

    @property
    def violations(self) -> list[VerificationRecord]:
        return [r for r in self.records if r.holds is False]


def report_lines(records: list[VerificationRecord]) -> str:
    dump = lambda obj: json.dumps(obj, sort_keys=True, separators=(",", ":"))
    lines = [dump({"type": "violation", **r.to_dict()}) for r in records if r.holds is False]
    lines += [dump({"type": "record", **r.to_dict()}) for r in records]
    return "".join(line + "\n" for line in lines)


SUMMARY_COLUMNS = ["entry", "pi", "check", "status", "holds", "lhs", "rhs", "qualifying", "threshold", "witness"]


def summary_csv(records: list[VerificationRecord]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SUMMARY_COLUMNS)
    for r in records:
        d = r.details
        wit = d.get("witness")
        w.writerow([
            r.entry, str(r.pi), r.check, r.status,
            "" if r.holds is None else str(r.holds).lower(),
            d.get("lhs", ""), d.get("rhs", ""), d.get("qualifying", ""), d.get("threshold", ""),
            "" if wit is None else " ".join(map(str, wit)) if isinstance(wit, list) else wit,
        ])
    return buf.getvalue()


def run_all(cfg: RunConfig, write: bool = True, log=None) -> RunResult:
    """Run every (entry, pi, check) task; raise CorpusError on an entry failure."""
    cfg.validate()
    set_caps(**{k: int(v) for k, v in cfg.caps.items()})
    try:
        entries = load_corpus(cfg.corpus, build=False)
        if cfg.entries:
            missing = set(cfg.entries) - {e.name for e in entries}
            if missing:
                raise ConfigError(f"no corpus entry named {sorted(missing)}")
            entries = [e for e in entries if e.name in cfg.entries]
        order = {e.name: i for i, e in enumerate(entries)}
        tasks = [(e, cfg) for e in entries]
        try:
            if cfg.jobs == 1:
                batches = [_worker(t) for t in tasks]
            else:
                with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
                    batches = list(pool.map(_worker, tasks))
        except EntryFailure as exc:
            raise CorpusError(str(exc)) from None
    finally:
        reset_caps()
    records = sorted((r for b in batches for r in b), key=lambda r: r.sort_key(order))
    code = EXIT_VIOLATION if any(r.holds is False for r in records) else EXIT_CLEAN
    result = RunResult(records, code)
    if write:
        out = Path(cfg.out)
        out.mkdir(parents=True, exist_ok=True)
        result.report_path = out / "report.jsonl"
        result.summary_path = out / "summary.csv"
        result.timings_path = out / "timings.csv"
        result.report_path.write_text(report_lines(records))
        result.summary_path.write_text(summary_csv(records))
        with result.timings_path.open("w") as fh:
            fh.write("entry,pi,check,seconds\n")
            for r in records:
                fh.write(f"{r.entry},\"{r.pi}\",{r.check},{r.timing:.6f}\n")
    if log:
        counts = {}
        for r in records:
            counts[r.status] = counts.get(r.status, 0) + 1
        log(f"{len(records)} records: " + ", ".join(f"{k} {v}" for k, v in sorted(counts.items())))
        for r in result.violations:
            log(f"VIOLATION {r.entry} pi={{{r.pi}}} {r.check}: {r.diff or r.details}")
    return result


__all__ = [
    "CHECKS",
    "ConfigError",
    "CorpusEntry",
    "CorpusError",
    "RunConfig",
    "RunResult",
    "VerificationRecord",
    "apply_expectations",
    "check_entry",
    "default_corpus_path",
    "load_corpus",
    "pi_sets_for",
    "report_lines",
    "run_all",
    "summary_csv",
    "verify_main_inequality",
]
