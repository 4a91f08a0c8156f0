"""Command-line front end.

    cyberins solve      --config cfg.json
    cyberins verify     --config cfg.json [--grid N]
    cyberins sweep      --config cfg.json --out sweep.csv
    cyberins simulate   --config cfg.json
    cyberins thresholds --config cfg.json

Exit codes: 0 success, 2 config error, 3 utility domain error,
4 verification or statistical failure, 5 I/O error.
"""
from __future__ import annotations

import argparse
import json
import re
import sys
from dataclasses import dataclass

import numpy as np

from . import analysis, closed_form, oracle, simulate
from .core_model import (
    BreachProbSpec,
    ContractA,
    ContractB,
    InvariantViolation,
    ScenarioAParams,
    ScenarioBParams,
    UtilityDomainError,
    UtilitySpec,
    ValueScaleSpec,
    firm_best_response,
    marginal_utility,
    provider_utility_A,
    provider_utility_B,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DOMAIN = 3
EXIT_FAIL = 4
EXIT_IO = 5

Z_LIMIT = 4.0
ORACLE_C = 4.0
ORACLE_TOL_B = 1e-9

UTILITY_PARAM = {"exponential": "a", "power": "beta", "log-shifted": "c"}
SCALE_PARAM = {"power": "beta", "log": "c"}


class ConfigError(Exception):
    pass


class _Exit(Exception):
    def __init__(self, code: int, message: str = ""):
        super().__init__(message)
        self.code = code
        self.message = message


def fmt(x) -> str:
    """17 significant digits: parses back to the identical double."""
    if isinstance(x, (bool, np.bool_)):
        return str(int(x))
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), ".17g")


# --------------------------------------------------------------------------
# Config loading
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Config:
    scenario: str
    params: ScenarioAParams | ScenarioBParams
    raw: dict
    text: str


class _Loader:
    def __init__(self, text: str):
        self.text = text

    def _line(self, key: str) -> str:
        m = re.search(r'"%s"\s*:' % re.escape(key), self.text)
        if m is None:
            return ""
        return f" (line {self.text.count(chr(10), 0, m.start()) + 1})"

    def fail(self, path: str, msg: str) -> ConfigError:
        # a missing key has no line of its own; anchor to the nearest ancestor
        parts = path.split(".")
        where = ""
        while parts and not where:
            where = self._line(parts.pop())
        return ConfigError(f"{path}: {msg}{where}")

    def block(self, obj: dict, path: str, required: bool = True):
        key = path.rsplit(".", 1)[-1]
        if key not in obj:
            if required:
                raise self.fail(path, "missing required block")
            return None
        val = obj[key]
        if not isinstance(val, dict):
            raise self.fail(path, "must be an object")
        return val

    def number(self, obj: dict, path: str, required: bool = True, default=None):
        key = path.rsplit(".", 1)[-1]
        if key not in obj:
            if required:
                raise self.fail(path, "missing required field")
            return default
        val = obj[key]
        if isinstance(val, bool) or not isinstance(val, (int, float)):
            raise self.fail(path, f"must be a number, got {val!r}")
        return val

    def integer(self, obj: dict, path: str, required: bool = True, default=None):
        val = self.number(obj, path, required, default)
        if val is not None and int(val) != val:
            raise self.fail(path, f"must be an integer, got {val!r}")
        return None if val is None else int(val)

    def family(self, obj: dict, path: str, allowed) -> str:
        key = path.rsplit(".", 1)[-1]
        if key not in obj:
            raise self.fail(path, "missing required field")
        fam = obj[key]
        if fam not in allowed:
            raise self.fail(path, f"must be one of {sorted(allowed)}, got {fam!r}")
        return fam

    def utility(self, cfg: dict) -> UtilitySpec:
        blk = self.block(cfg, "utility")
        fam = self.family(blk, "utility.family", UTILITY_PARAM)
        prm = self.block(blk, "utility.params")
        name = UTILITY_PARAM[fam]
        val = self.number(prm, f"utility.params.{name}")
        try:
            return UtilitySpec(fam, float(val))
        except ValueError as exc:
            raise self.fail(f"utility.params.{name}", str(exc)) from exc

    def breach(self, cfg: dict) -> BreachProbSpec:
        blk = self.block(cfg, "breach")
        fam = self.family(blk, "breach.family", ("compound", "saturating", "table"))
        prm = self.block(blk, "breach.params")
        try:
            if fam == "table":
                values = prm.get("values")
                if not isinstance(values, list):
                    raise self.fail("breach.params.values", "must be a list of numbers")
                return BreachProbSpec("table", values=tuple(values))
            p1 = self.number(prm, "breach.params.p1")
            if fam == "compound":
                return BreachProbSpec("compound", p1=p1)
            return BreachProbSpec("saturating", p1=p1, p_max=self.number(prm, "breach.params.p_max"))
        except ValueError as exc:
            raise self.fail("breach.params", str(exc)) from exc

    def scale(self, cfg: dict) -> ValueScaleSpec:
        blk = self.block(cfg, "scale")
        fam = self.family(blk, "scale.family", ("power", "log", "table"))
        prm = self.block(blk, "scale.params")
        try:
            if fam == "table":
                values = prm.get("values")
                if not isinstance(values, list):
                    raise self.fail("scale.params.values", "must be a list of numbers")
                return ValueScaleSpec("table", values=tuple(values))
            name = SCALE_PARAM[fam]
            return ValueScaleSpec(fam, self.number(prm, f"scale.params.{name}"))
        except ValueError as exc:
            raise self.fail("scale.params", str(exc)) from exc

    def load(self) -> Config:
        try:
            cfg = json.loads(self.text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
        if not isinstance(cfg, dict):
            raise ConfigError("top level must be a JSON object")
        scenario = cfg.get("scenario")
        if scenario not in ("A", "B"):
            raise self.fail("scenario", f'must be "A" or "B", got {scenario!r}')
        prm = self.block(cfg, "params")
        utility = self.utility(cfg)
        try:
            if scenario == "A":
                values = {k: self.number(prm, f"params.{k}") for k in ("V", "W", "L", "psi", "alpha", "gamma")}
                params = ScenarioAParams(**values, utility=utility)
            else:
                W = self.number(prm, "params.W")
                L = self.number(prm, "params.L")
                k = self.integer(prm, "params.k")
                params = ScenarioBParams(W, L, k, self.breach(cfg), self.scale(cfg), utility)
        except InvariantViolation as exc:
            raise ConfigError(str(exc)) from exc
        except ValueError as exc:
            raise ConfigError(f"params: {exc}{self._line('params')}") from exc
        return Config(scenario, params, cfg, self.text)


def load_config(path: str) -> Config:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise _Exit(EXIT_IO, f"cannot read config: {exc}") from exc
    try:
        return _Loader(text).load()
    except ConfigError as exc:
        raise _Exit(EXIT_CONFIG, f"config error: {exc}") from exc


def _report(pairs) -> str:
    return "".join(f"{k} = {v}\n" for k, v in pairs)


def _grid(cfg: Config, override: int | None) -> oracle.GridSpec:
    if override is not None:
        try:
            return oracle.GridSpec.uniform(override)
        except ValueError as exc:
            raise _Exit(EXIT_CONFIG, f"config error: --grid: {exc}") from exc
    ld = _Loader(cfg.text)
    blk = ld.block(cfg.raw, "grid", required=False) or {}
    try:
        return oracle.GridSpec(
            ld.integer(blk, "grid.n_phi", False, 401),
            ld.integer(blk, "grid.n_t", False, 401),
            ld.integer(blk, "grid.n_Lc", False, 401),
        )
    except ConfigError as exc:
        raise _Exit(EXIT_CONFIG, f"config error: {exc}") from exc
    except ValueError as exc:
        raise _Exit(EXIT_CONFIG, f"config error: grid: {exc}") from exc


# --------------------------------------------------------------------------
# Commands
# --------------------------------------------------------------------------


def cmd_solve(cfg: Config) -> tuple[str, int]:
    p = cfg.params
    if cfg.scenario == "A":
        c = closed_form.optimal_contract_A(p)
        th = closed_form.threshold_report(p)
        out = _report([
            ("scenario", "A"),
            ("phi", fmt(c.phi)),
            ("t", fmt(c.t)),
            ("L_c", fmt(c.L_c)),
            ("investment", fmt(c.investment)),
            ("regime", "high" if c.investment else "low"),
            ("psi_threshold_L", fmt(th.psi_threshold_L)),
            ("psi_threshold_V", fmt(th.psi_threshold_V)),
            ("psi_star", fmt(th.psi_star)),
            ("binding", th.binding),
            ("provider_value", fmt(c.provider_value)),
        ])
    else:
        c = closed_form.optimal_contract_B(p)
        out = _report([
            ("scenario", "B"),
            ("s", fmt(c.s)),
            ("t", fmt(c.t)),
            ("L_c", fmt(c.L_c)),
            ("regime", "participate" if c.s else "abstain"),
            ("k", fmt(p.k)),
            ("margin", fmt(closed_form.participation_margin(p))),
            ("provider_value", fmt(c.provider_value)),
        ])
    return out, EXIT_OK


def oracle_tolerance_A(p: ScenarioAParams, g: oracle.GridSpec) -> float:
    """C * grid step * steepest utility slope over the grid's wealth range."""
    lowest_wealth = p.W - p.L
    return ORACLE_C * g.step_A(p) * float(marginal_utility(p.utility, lowest_wealth))


def cmd_verify(cfg: Config, grid: int | None = None) -> tuple[str, int]:
    p = cfg.params
    g = _grid(cfg, grid)
    if cfg.scenario == "A":
        cf = closed_form.optimal_contract_A(p)
        res = oracle.grid_solve_A(p, g)
        tol = oracle_tolerance_A(p, g)
    else:
        cf = closed_form.optimal_contract_B(p)
        res = oracle.grid_solve_B(p, g)
        tol = ORACLE_TOL_B
    diff = res.value - cf.provider_value
    ok = abs(diff) <= tol
    out = _report([
        ("scenario", cfg.scenario),
        ("grid", f"{g.n_phi}x{g.n_t}x{g.n_Lc}" if cfg.scenario == "A" else f"2x{g.n_t}x{g.n_Lc}"),
        ("closed_form_value", fmt(cf.provider_value)),
        ("oracle_value", fmt(res.value)),
        ("difference", fmt(diff)),
        ("tolerance", fmt(tol)),
        ("feasible_points", fmt(res.n_feasible)),
        ("result", "PASS" if ok else "FAIL"),
    ])
    return out, EXIT_OK if ok else EXIT_FAIL


def _sweep_axis(cfg: Config) -> np.ndarray:
    ld = _Loader(cfg.text)
    blk = ld.block(cfg.raw, "sweep")
    want = "psi" if cfg.scenario == "A" else "k"
    axis = blk.get("axis", want)
    if axis != want:
        raise ld.fail("sweep.axis", f"scenario {cfg.scenario} sweeps {want!r}, got {axis!r}")
    start = ld.number(blk, "sweep.start")
    stop = ld.number(blk, "sweep.stop")
    if cfg.scenario == "A":
        steps = ld.integer(blk, "sweep.steps")
        if steps < 1 or stop < start or (steps > 1 and stop == start):
            raise ConfigError("sweep: empty sweep")
        return np.linspace(start, stop, steps)
    if int(start) != start or int(stop) != stop:
        raise ld.fail("sweep.start", "k bounds must be integers")
    steps = ld.integer(blk, "sweep.steps", False)
    if stop < start or (steps is not None and steps < 1):
        raise ConfigError("sweep: empty sweep")
    if steps is None:
        return np.arange(int(start), int(stop) + 1)
    ks = np.linspace(start, stop, steps)
    if np.any(ks != np.round(ks)):
        raise ld.fail("sweep.steps", "k grid must land on integers")
    return np.unique(ks.astype(int))


def sweep_csv(cfg: Config) -> str:
    try:
        axis = _sweep_axis(cfg)
    except ConfigError as exc:
        raise _Exit(EXIT_CONFIG, f"config error: {exc}") from exc
    if cfg.scenario == "A":
        series = analysis.sweep_psi(cfg.params, axis)
    else:
        series = analysis.sweep_k(cfg.params, axis)
    header = ",".join([series.axis, *series.columns])
    lines = [header] + [",".join(fmt(x) for x in row) for row in series.rows()]
    return "\n".join(lines) + "\n"


def cmd_sweep(cfg: Config, out_path: str) -> tuple[str, int]:
    text = sweep_csv(cfg)
    try:
        with open(out_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise _Exit(EXIT_IO, f"cannot write {out_path}: {exc}") from exc
    rows = text.count("\n") - 1
    return _report([("output", out_path), ("rows", fmt(rows))]), EXIT_OK


def _override_contract(cfg: Config):
    ld = _Loader(cfg.text)
    sim = ld.block(cfg.raw, "simulate")
    blk = ld.block(sim, "simulate.contract", required=False)
    p = cfg.params
    if blk is None:
        if cfg.scenario == "A":
            return closed_form.optimal_contract_A(p)
        return closed_form.optimal_contract_B(p)
    if cfg.scenario == "A":
        phi = ld.number(blk, "simulate.contract.phi")
        t = ld.number(blk, "simulate.contract.t")
        L_c = ld.number(blk, "simulate.contract.L_c")
        if phi < 0 or not 0 <= t <= p.L or L_c < 0:
            raise ConfigError("simulate.contract: need phi >= 0, 0 <= t <= L, L_c >= 0")
        inv = firm_best_response(p, phi, t)
        stated = ld.integer(blk, "simulate.contract.investment", False)
        if stated is not None and stated != inv:
            raise ld.fail(
                "simulate.contract.investment",
                f"firm best response at t={t} is {inv}, not {stated}",
            )
        return ContractA(phi, t, L_c, inv, provider_utility_A(p, phi, t, L_c, inv))
    s = ld.integer(blk, "simulate.contract.s")
    t = ld.number(blk, "simulate.contract.t", False, 0.0)
    L_c = ld.number(blk, "simulate.contract.L_c")
    if s not in (0, 1) or not 0 <= t <= p.L or L_c < 0:
        raise ConfigError("simulate.contract: need s in {0, 1}, 0 <= t <= L, L_c >= 0")
    return ContractB(s, t, L_c, provider_utility_B(p, t, L_c, s))


def cmd_simulate(cfg: Config) -> tuple[str, int]:
    ld = _Loader(cfg.text)
    try:
        sim = ld.block(cfg.raw, "simulate")
        n = ld.integer(sim, "simulate.n")
        seed = ld.integer(sim, "simulate.seed", False, 0)
        if n < 1:
            raise ld.fail("simulate.n", f"must be >= 1, got {n}")
        if not 0 <= seed < 2**64:
            raise ld.fail("simulate.seed", "must lie in [0, 2**64)")
        contract = _override_contract(cfg)
    except ConfigError as exc:
        raise _Exit(EXIT_CONFIG, f"config error: {exc}") from exc
    if cfg.scenario == "A":
        rep = simulate.simulate_A(cfg.params, contract, n, seed)
    else:
        rep = simulate.simulate_B(cfg.params, contract, n, seed)
    pairs = [
        ("scenario", cfg.scenario),
        ("rng", rep.rng),
        ("seed", fmt(rep.seed)),
        ("n", fmt(rep.n)),
        ("mean_utility", fmt(rep.mean_utility)),
        ("std_error", fmt(rep.std_error)),
        ("analytical", fmt(rep.analytical)),
        ("z", fmt(rep.z)),
    ]
    pairs += [(f"count_{k}", fmt(v)) for k, v in rep.outcome_counts.items()]
    ok = abs(rep.z) <= Z_LIMIT
    pairs.append(("result", "PASS" if ok else "FAIL"))
    return _report(pairs), EXIT_OK if ok else EXIT_FAIL


def cmd_thresholds(cfg: Config) -> tuple[str, int]:
    p = cfg.params
    if cfg.scenario == "A":
        th = analysis.investment_threshold(p)
        return _report([
            ("scenario", "A"),
            ("psi_threshold_L", fmt(th.psi_threshold_L)),
            ("psi_threshold_V", fmt(th.psi_threshold_V)),
            ("psi_star", fmt(th.psi_star)),
            ("binding", th.binding),
        ]), EXIT_OK
    ld = _Loader(cfg.text)
    try:
        blk = ld.block(cfg.raw, "thresholds", required=False) or {}
        k_max = ld.integer(blk, "thresholds.k_max", False, 64)
        if k_max < 2:
            raise ld.fail("thresholds.k_max", f"must be >= 2, got {k_max}")
        expected = ld.integer(blk, "thresholds.expected_k_star", False)
    except ConfigError as exc:
        raise _Exit(EXIT_CONFIG, f"config error: {exc}") from exc
    rep = analysis.participation_threshold(p, k_max)
    pairs = [("scenario", "B"), ("k_max", fmt(k_max))]
    pairs += [(f"margin[{int(k)}]", fmt(m)) for k, m in zip(rep.ks, rep.margins)]
    pairs += [
        ("change_points", " ".join(map(str, rep.change_points)) or "none"),
        ("monotone", "yes" if rep.monotone else "no"),
        ("k_star", "none" if rep.k_star is None else str(rep.k_star)),
    ]
    if expected is None:
        return _report(pairs), EXIT_OK
    # a pinned threshold turns the scan into a check
    ok = rep.k_star == expected
    pairs += [("expected_k_star", str(expected)), ("result", "PASS" if ok else "FAIL")]
    return _report(pairs), EXIT_OK if ok else EXIT_FAIL


# --------------------------------------------------------------------------
# Entry point
# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cyberins", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, helptext in [
        ("solve", "closed-form optimal contract"),
        ("verify", "check the closed form against the brute-force solver"),
        ("sweep", "write a psi or k sweep as CSV"),
        ("simulate", "Monte Carlo check of expected utility"),
        ("thresholds", "investment or participation thresholds"),
    ]:
        sp = sub.add_parser(name, help=helptext)
        sp.add_argument("--config", required=True, help="path to a JSON config")
        if name == "sweep":
            sp.add_argument("--out", required=True, help="CSV output path")
        if name == "verify":
            sp.add_argument("--grid", type=int, default=None, help="grid points per axis")
    return parser


def run(argv=None) -> tuple[str, str, int]:
    """Run a command and return (stdout, stderr, exit code)."""
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
        if args.command == "solve":
            out, code = cmd_solve(cfg)
        elif args.command == "verify":
            out, code = cmd_verify(cfg, args.grid)
        elif args.command == "sweep":
            out, code = cmd_sweep(cfg, args.out)
        elif args.command == "simulate":
            out, code = cmd_simulate(cfg)
        else:
            out, code = cmd_thresholds(cfg)
    except _Exit as exc:
        return "", exc.message + "\n", exc.code
    except UtilityDomainError as exc:
        return "", f"utility domain error: {exc}\n", EXIT_DOMAIN
    except InvariantViolation as exc:
        # e.g. a table family that stops short of the requested k
        return "", f"config error: {exc}\n", EXIT_CONFIG
    return out, "", code


def main(argv=None) -> int:
    out, err, code = run(argv)
    sys.stdout.write(out)
    sys.stderr.write(err)
    return code


if __name__ == "__main__":
    sys.exit(main())
