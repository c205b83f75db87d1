"""Command-line front end.

Every subcommand declares a parameter schema.  Parameters come from a JSON
document (``--json``) overridden by ``--name value`` options, are validated
against the schema and then dispatched to the library.  The result is a
SimReport rendered as CSV or JSON.  Exit codes: 0 success, 2 configuration
error, 3 decode or simulation error.
"""

from __future__ import annotations

import json
import math
import sys
import time
from dataclasses import dataclass, field
from typing import Any, Callable

import click
import numpy as np

from . import access, biometrics as bio, capacity as cap, constrained as con, defects as dfx
from .errors import CodingError, ConfigError, DecodeFailure, ReconstructFailure
from .galois import GaloisField, element_table, is_prime, parse_poly
from .modem import SCHEMES, ber_sim
from .packets import encode_array, mk_decode
from .report import SimReport
from .rng import stream
from .rs import RsCode
from .wiretap import secrecy_capacity, spc_secret_sim

REQUIRED = object()
U64 = 2**64


@dataclass(frozen=True)
class Param:
    kind: str
    default: Any = REQUIRED
    help: str = ""


@dataclass(frozen=True)
class Command:
    path: str
    schema: dict
    runner: Callable
    help: str


COMMANDS: dict[str, Command] = {}


def command(path: str, help: str, **schema: Param):
    def deco(fn):
        COMMANDS[path] = Command(path, schema, fn, help)
        return fn

    return deco


# parameter parsing and validation
def _from_text(kind: str, text: str):
    if kind == "int":
        return int(text)
    if kind == "float":
        return float(text)
    if kind == "bool":
        low = text.lower()
        if low in ("1", "true", "yes", "on"):
            return True
        if low in ("0", "false", "no", "off"):
            return False
        raise ValueError(text)
    if kind in ("ints", "floats"):
        t = text.strip()
        if t.startswith("["):
            return json.loads(t)
        return [x for x in t.replace(",", " ").split()]
    if kind == "json":
        return json.loads(text)
    return text


def coerce(name: str, kind: str, value):
    """Check or convert one parameter value; None passes through."""
    if value is None:
        return None
    try:
        if isinstance(value, str) and kind != "str":
            value = _from_text(kind, value)
        if kind == "int":
            if isinstance(value, bool) or not isinstance(value, int):
                if isinstance(value, float) and value.is_integer():
                    return int(value)
                raise TypeError
            return value
        if kind == "float":
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise TypeError
            return float(value)
        if kind == "bool":
            if not isinstance(value, bool):
                raise TypeError
            return value
        if kind == "str":
            if not isinstance(value, str):
                raise TypeError
            return value
        if kind in ("ints", "floats"):
            if not isinstance(value, list):
                raise TypeError
            return [coerce(name, kind[:-1], v) for v in value]
        return value
    except (TypeError, ValueError, json.JSONDecodeError) as e:
        if isinstance(e, ConfigError):
            raise
        raise ConfigError(f"parameter {name!r}: expected {kind}, got {value!r}") from None


def validate(cmd: Command, doc: dict) -> dict:
    if not isinstance(doc, dict):
        raise ConfigError("parameters must be a JSON object")
    unknown = sorted(set(doc) - set(cmd.schema))
    if unknown:
        raise ConfigError(f"{cmd.path}: unknown parameter(s) {', '.join(unknown)}")
    out = {}
    for name, p in cmd.schema.items():
        if name in doc:
            out[name] = coerce(name, p.kind, doc[name])
        elif p.default is REQUIRED:
            raise ConfigError(f"{cmd.path}: missing parameter {name!r}")
        else:
            out[name] = p.default
    return out


@dataclass
class RunConfig:
    command: str
    params: dict = field(default_factory=dict)
    seed: int = 0
    out: str | None = None
    format: str = "csv"

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command {self.command!r}")
        if self.format not in ("csv", "json"):
            raise ConfigError("format must be csv or json")
        if isinstance(self.seed, bool) or not isinstance(self.seed, int) or not 0 <= self.seed < U64:
            raise ConfigError("seed must be an unsigned 64-bit integer")

    def validated(self) -> dict:
        return validate(COMMANDS[self.command], self.params)


def _plain(v):
    if isinstance(v, np.generic):
        return v.item()
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    return v


def run(config: RunConfig):
    """SimReport for the command (``vault enroll`` returns the record JSON)."""
    cmd = COMMANDS[config.command]
    params = config.validated()
    t0 = time.perf_counter()
    rep = cmd.runner(params, config.seed)
    if isinstance(rep, SimReport):
        rep.name = config.command.replace(" ", "_").replace("-", "_")
        rep.params = {k: _plain(v) for k, v in params.items()}
        rep.seed = config.seed
        rep.rows = [{k: _plain(v) for k, v in r.items()} for r in rep.rows]
        rep.wall_time = time.perf_counter() - t0
    return rep


def parse_grid(text: str, kind: str = "float") -> list:
    """'a,b,c' or 'lo:hi:count' (inclusive linspace); empty text gives []."""
    t = (text or "").strip()
    if not t:
        return []
    try:
        if ":" in t:
            lo, hi, num = t.split(":")
            vals = np.linspace(float(lo), float(hi), int(num)).tolist()
        else:
            vals = [float(x) for x in t.replace(",", " ").split()]
    except ValueError:
        raise ConfigError(f"bad grid {text!r}") from None
    if kind == "int":
        if any(not float(v).is_integer() for v in vals):
            raise ConfigError("integer axis needs integer grid values")
        return [int(v) for v in vals]
    return vals


def sweep(config: RunConfig, axis: str, grid) -> SimReport:
    """One row per grid point holding every metric value, plus its stderr for
    Monte-Carlo metrics.  Each point reuses the master seed (common random numbers)."""
    cmd = COMMANDS[config.command]
    p = cmd.schema.get(axis)
    if p is None or p.kind not in ("int", "float"):
        raise ConfigError(f"{config.command}: {axis!r} is not a numeric parameter")
    grid = [coerce(axis, p.kind, v) for v in grid]
    # validate the fixed parameters even when the grid is empty
    base = validate(Command(cmd.path, {**cmd.schema, axis: Param(p.kind, None)}, cmd.runner, cmd.help),
                    config.params)
    t0 = time.perf_counter()
    rows = []
    for v in grid:
        r = run(RunConfig(config.command, {**config.params, axis: v}, config.seed))
        row = {axis: v}
        for k, m in r.metrics.items():
            if k == axis:
                continue
            row[k] = m.value
            if m.trials:
                row[f"{k}_stderr"] = m.stderr
        rows.append(row)
    base.pop(axis)
    params = {k: _plain(v) for k, v in base.items()}
    params.update(axis=axis, grid=list(grid))
    name = config.command.replace(" ", "_").replace("-", "_") + "_sweep"
    return SimReport(name, params, config.seed, rows=rows, wall_time=time.perf_counter() - t0)


def render(result, fmt: str) -> str:
    if isinstance(result, str):
        return result if result.endswith("\n") else result + "\n"
    if fmt == "csv" and not result.rows and "axis" in result.params:
        return result.params["axis"] + "\n"  # empty series
    if fmt == "json":
        return result.to_json() + "\n"
    if result.rows and result.metrics:
        # one column set per row: every metric repeated on each table row
        extra = {}
        for k, m in result.metrics.items():
            extra[k] = m.value
            if m.trials:
                extra[f"{k}_stderr"] = m.stderr
        rows = [{**r, **extra} for r in result.rows]
        return SimReport(result.name, result.params, result.seed, rows=rows).to_csv()
    return result.to_csv()


# shared helpers
def field_for(q: int, poly=None) -> GaloisField:
    if is_prime(q):
        if poly is not None:
            raise ConfigError("a prime field takes no polynomial")
        return GaloisField.prime(q)
    m = q.bit_length() - 1
    if q > 2 and q == 1 << m:
        return GaloisField.binary(m, poly)
    raise ConfigError("q must be a prime or a power of two")


def _code(p: dict) -> RsCode:
    F = field_for(p["q"], p.get("poly"))
    n = p.get("n") or F.q - 1
    variant = p.get("variant") or ("standard" if n == F.q - 1 else "shortened")
    return RsCode(F, n, p["k"], variant, p.get("first_row") or 0)


def _vec(v) -> str:
    return " ".join(str(int(x)) for x in v)


def arq_efficiency(p: float, R: float) -> float:
    """Basic ARQ transmission efficiency (1 - p) R."""
    if not 0 <= p <= 1 or not 0 < R <= 1:
        raise ConfigError("need 0 <= p <= 1 and 0 < R <= 1")
    return (1 - p) * R


CODE = dict(q=Param("int", 8, "field size"), poly=Param("str", None, "field polynomial"),
            n=Param("int", None, "length (default q - 1)"), k=Param("int", REQUIRED, "dimension"))


# gf, rs, packets
@command("gf table", "Element table (power, polynomial, tuple, inverse) of GF(2^m) or GF(p).",
         m=Param("int", None), p=Param("int", None), poly=Param("str", None))
def _gf_table(p, seed):
    if (p["m"] is None) == (p["p"] is None):
        raise ConfigError("give exactly one of m (binary field) or p (prime field)")
    if p["m"] is not None:
        F = GaloisField.binary(p["m"], None if p["poly"] is None else parse_poly(p["poly"]))
    else:
        F = field_for(p["p"], p["poly"])
    return SimReport("", {}, seed, rows=element_table(F))


@command("rs encode", "Encode information symbols with an RS code.",
         **CODE, variant=Param("str", None), first_row=Param("int", 0), info=Param("ints"),
         systematic=Param("bool", False))
def _rs_encode(p, seed):
    code = _code(p)
    c = code.encode_systematic(p["info"]) if p["systematic"] else code.encode(p["info"])
    return SimReport("", {}, seed, rows=[{"position": i, "symbol": s} for i, s in enumerate(c)])


@command("rs decode", "Correct errors (and erasures) in a received RS word.",
         **CODE, variant=Param("str", None), first_row=Param("int", 0), received=Param("ints"),
         erasures=Param("ints", []))
def _rs_decode(p, seed):
    code = _code(p)
    r = p["received"]
    res = code.decode_errors_and_erasures(r, p["erasures"]) if p["erasures"] else code.decode_errors(r)
    if not res.ok:
        raise DecodeFailure(f"decoder status {res.status}")
    err = dict(zip(res.error_positions, res.error_values))
    rows = [{"position": i, "received": r[i], "decoded": res.codeword[i], "error": err.get(i, 0),
             "info": res.info[i] if i < len(res.info) else ""} for i in range(code.n)]
    rep = SimReport("", {}, seed, rows=rows)
    rep.add("errors", len(res.error_positions))
    return rep


@command("packets encode", "Code array whose columns are RS codewords of the packet columns.",
         **CODE, packets=Param("json", REQUIRED, "k x N symbol array"))
def _packets_encode(p, seed):
    R = encode_array(_code(p), p["packets"])
    return SimReport("", {}, seed, rows=[{"row": i, "symbols": _vec(r)} for i, r in enumerate(R)])


@command("packets decode", "Recover the k x N packet array from an n x N array with corrupted rows.",
         **CODE, received=Param("json", REQUIRED, "n x N symbol array"))
def _packets_decode(p, seed):
    P = mk_decode(_code(p), p["received"])
    return SimReport("", {}, seed, rows=[{"row": i, "symbols": _vec(r)} for i, r in enumerate(P)])


# simulators
@command("sim aloha", "Slotted Aloha throughput; give p or the offered load G = pT.",
         T=Param("int", 10), p=Param("float", None), G=Param("float", None), slots=Param("int", 1_000_000))
def _sim_aloha(p, seed):
    if p["p"] is not None and p["G"] is not None:
        raise ConfigError("give p or G, not both")
    T = p["T"]
    prob = p["p"] if p["G"] is None else p["G"] / T
    if p["G"] is not None and not 0 <= prob <= 1:
        raise ConfigError("G must lie in [0, T]")
    rep = access.aloha_sim(access.AccessParams(T=T, p=0.1 if prob is None else prob), p["slots"], seed)
    rep.add("G", (0.1 if prob is None else prob) * T)
    return rep


@command("sim array-access", "Feedback-free array access over Z parallel channels.",
         Z=Param("int", 20), T=Param("int", 4), n=Param("int", 20), k=Param("int", None),
         N=Param("int", 16), blocks=Param("int", 1000))
def _sim_array(p, seed):
    k = p["k"] or access.largest_rate_k(p["Z"], p["T"], p["n"])
    prm = access.AccessParams(T=p["T"], Z=p["Z"])
    return access.array_access_sim(prm, p["n"], k, p["N"], p["blocks"], seed)


@command("sim titlebaum", "Titlebaum signature access error rate.",
         M=Param("int", 16), T=Param("int", 8), L=Param("int", 8), trials=Param("int", 100_000))
def _sim_titlebaum(p, seed):
    return access.titlebaum_sim(p["M"], p["T"], p["L"], p["trials"], seed)


@command("sim xor-access", "Active-user identification over the XOR channel.",
         q=Param("int", 16), poly=Param("str", None), n=Param("int", None), k=Param("int", 7),
         T=Param("int", 4), trials=Param("int", 1000))
def _sim_xor(p, seed):
    return access.xor_access_sim(_code(p), p["T"], p["trials"], seed)


@command("sim ber", f"Information bit error rate; scheme one of {', '.join(SCHEMES)}.",
         scheme=Param("str", "uncoded"), ebn0_db=Param("float", 4.0), info_bits=Param("int", 100_000),
         m=Param("int", 5), k=Param("int", 21), N=Param("int", 9), spc_n=Param("int", 8))
def _sim_ber(p, seed):
    if p["scheme"] not in SCHEMES:
        raise ConfigError(f"unknown scheme {p['scheme']!r}")
    return ber_sim(p["scheme"], p["ebn0_db"], p["info_bits"], seed,
                   m=p["m"], k=p["k"], N=p["N"], spc_n=p["spc_n"])


@command("sim wiretap", "Attacker error rate on the single-parity-check secret.",
         n=Param("int", 7), p=Param("float", 0.1), trials=Param("int", 100_000))
def _sim_wiretap(p, seed):
    return spc_secret_sim(p["n"], p["p"], p["trials"], seed)


VAULT_SCHEMES = ("syndrome", "jw", "jw-t", "js", "js-dodis")


@command("sim far-frr", "Impostor FAR (all schemes) and legal-user FRR (jw) against closed forms.",
         scheme=Param("str", "jw"), q=Param("int", 8), poly=Param("str", None), n=Param("int", None),
         k=Param("int", 3), t=Param("int", None), p=Param("float", 0.05), trials=Param("int", 10_000))
def _sim_far_frr(p, seed):
    if p["scheme"] not in VAULT_SCHEMES:
        raise ConfigError(f"unknown scheme {p['scheme']!r}")
    code = _code(p)
    rep = bio.impostor_far_sim(p["scheme"], code, p["trials"], seed, t=p["t"])
    if p["scheme"] == "jw":
        rep.metrics.update(bio.jw_frr_sim(code, p["p"], p["trials"], seed).metrics)
    return rep


# evaluators
EVAL_KINDS = {
    "secrecy": ("p", "q"), "gaussian": ("P", "B", "noise"), "arq": ("p", "R"), "aloha": ("T", "p"),
    "array": ("Z", "T"), "or": ("M", "T"), "coop": ("k", "capacities"), "waterfill": ("P", "B", "variances"),
    "impulse": ("case", "A", "Gamma", "P", "B"), "wom": ("p",), "kt": ("n", "k", "t"),
}


@command("eval capacity", f"Closed-form rates; kind one of {', '.join(EVAL_KINDS)}.",
         kind=Param("str"), p=Param("float", None), q=Param("float", None), P=Param("float", None),
         B=Param("float", None), noise=Param("float", None), R=Param("float", None), T=Param("int", None),
         Z=Param("int", None), M=Param("int", None), k=Param("float", None), n=Param("int", None),
         t=Param("int", None), capacities=Param("floats", None), variances=Param("floats", None),
         shares=Param("floats", None), case=Param("str", None), A=Param("float", None),
         Gamma=Param("float", None), unit=Param("str", "bit"))
def _eval_capacity(p, seed):
    kind = p["kind"]
    if kind not in EVAL_KINDS:
        raise ConfigError(f"unknown kind {kind!r}")
    missing = [x for x in EVAL_KINDS[kind] if p[x] is None]
    if missing:
        raise ConfigError(f"kind {kind!r} needs {', '.join(missing)}")
    rep = SimReport("", {}, seed)
    if kind == "secrecy":
        rep.add("Cs", secrecy_capacity(p["p"], p["q"]))
    elif kind == "gaussian":
        rep.add("C", cap.gaussian_capacity(p["P"], p["B"], p["noise"], p["unit"]))
    elif kind == "arq":
        rep.add("eta", arq_efficiency(p["p"], p["R"]))
    elif kind == "aloha":
        rep.add("eta", access.aloha(access.AccessParams(T=p["T"], p=p["p"])))
    elif kind == "array":
        rep.add("eta", access.array_throughput(p["Z"], p["T"]))
    elif kind == "or":
        p_star, best, thm = access.or_optimal(p["M"], p["T"])
        rep.add("p_star", p_star)
        rep.add("rate", best)
        rep.add("rate_theorem_p", thm)
    elif kind == "coop":
        lengths, c_df, c_coop = cap.coop_allocate(p["k"], p["capacities"])
        rep.rows = [{"hop": i + 1, "length": v} for i, v in enumerate(lengths)]
        rep.add("C_df", c_df)
        rep.add("C_coop", c_coop)
    elif kind == "waterfill":
        powers = cap.waterfill_n(p["P"], p["B"], p["variances"], p["shares"])
        levels = cap.water_levels(powers, p["B"], p["variances"], p["shares"])
        rep.rows = [{"channel": i, "power": float(a), "level": float(b)} for i, (a, b) in enumerate(zip(powers, levels))]
        rep.add("total_power", float(np.sum(powers)))
    elif kind == "impulse":
        c = cap.impulse_capacity(p["case"], cap.MiddletonParams(A=p["A"], Gamma=p["Gamma"]), p["P"], p["B"], p["unit"])
        rep.add("C", c.value)
        rep.add("upper_bound", float(c.upper_bound))
    elif kind == "wom":
        rep.add("total_rate", dfx.total_rate(p["p"]))
    elif kind == "kt":
        b = dfx.kt_bound(p["n"], int(p["k"]), p["t"])
        rep.add("log_F", b.log_F)
        rep.add("F_bound", b.F_bound)
        rep.add("R_bound", b.R_bound)
    return rep


@command("eval middleton", "Middleton class-A states and sampled variance against sigma_I^2 + sigma_G^2.",
         A=Param("float", 0.1), Gamma=Param("float", 0.1), sigma_G2=Param("float", 1.0),
         count=Param("int", 1_000_000))
def _eval_middleton(p, seed):
    prm = cap.MiddletonParams(A=p["A"], sigma_G2=p["sigma_G2"], Gamma=p["Gamma"])
    x = cap.middleton(prm, p["count"], seed)
    rep = SimReport("", {}, seed, rows=[{"m": m, "P_m": pm, "variance": v} for m, pm, v in cap.middleton_states(prm)])
    sq = x * x
    rep.add("variance", float(sq.mean()), float(sq.std() / math.sqrt(len(x))), len(x))
    rep.add("variance_formula", prm.sigma_I2 + prm.sigma_G2)
    return rep


# constrained coding
@command("constrained avoid", "Systematic RS encoding whose control symbols keep every symbol out of A.",
         **CODE, first_row=Param("int", 0), kappa=Param("int"), r=Param("int"), A=Param("ints"),
         info=Param("ints"), allow_infeasible=Param("bool", False))
def _con_avoid(p, seed):
    cfg = con.AvoidanceConfig(_code({**p, "variant": None}), p["kappa"], p["r"], p["A"], p["allow_infeasible"])
    chosen = con.avoid_encode(cfg, p["info"])
    rows = []
    for s in con.control_candidates(cfg, p["info"]):
        c = cfg.codeword(p["info"], s)
        rows.append({"control": _vec(s), "codeword": _vec(c), "chosen": int(c == chosen)})
    rep = SimReport("", {}, seed, rows=rows)
    rep.add("suitable", len(rows))
    return rep


@command("constrained rll", "Encode with the d = 1 RLL block code and scan the run lengths.",
         messages=Param("ints", None), count=Param("int", 0))
def _con_rll(p, seed):
    code = con.RLL_D1_CODE
    msgs = p["messages"]
    if msgs is None:
        msgs = stream(seed).integers(0, len(code.table), p["count"]).tolist()
    bits = con.rll_encode(code, msgs)
    L = code.length
    interior = con.runs(bits)[1:-1]
    rep = SimReport("", {}, seed)
    if p["messages"] is not None:
        rep.rows = [{"message": m, "word": bits[i * L:(i + 1) * L]} for i, m in enumerate(msgs)]
    rep.add("bits", len(bits))
    rep.add("violations", sum(r < code.d + 1 for r in interior))
    rep.add("min_interior_run", min(interior) if interior else 0)
    rep.add("rate", float(code.rate))
    return rep


@command("constrained odp", "Distance profile of a generator matrix and its optimum (ODP).",
         q=Param("int", 2), poly=Param("str", None), G=Param("json", None), n=Param("int", None),
         k=Param("int", None), direction=Param("str", "deletion"), mode=Param("str", "exhaustive"))
def _con_odp(p, seed):
    F = field_for(p["q"], p["poly"])
    rep = SimReport("", {}, seed)
    G = p["G"]
    if G is None:
        if p["k"] is None:
            raise ConfigError("give G or an RS code (n, k)")
        code = RsCode(F, p["n"] or F.q - 1, p["k"], "standard" if (p["n"] or F.q - 1) == F.q - 1 else "shortened")
        G = code.G
        closed = con.rs_profile(code.n, code.k, p["direction"])
    else:
        closed = None
    given = con.distance_profile(F, G, p["direction"])
    best = con.odp(F, G, p["direction"], p["mode"])
    rep.rows = [{"i": i + 1, "profile": a, "odp": b, "odp_row": _vec(r)}
                for i, (a, b, r) in enumerate(zip(given.values, best.values, best.matrix))]
    if closed is not None:
        rep.add("closed_form_match", float(tuple(best.values) == tuple(closed)))
    return rep


@command("constrained same-weight", "Same-weight RS coset code: encode info or decode a received word.",
         q=Param("int", 8), poly=Param("str", None), n=Param("int", None), k=Param("int"),
         info=Param("ints", None), received=Param("json", None), erasures=Param("ints", []))
def _con_same_weight(p, seed):
    F = field_for(p["q"], p["poly"])
    code = con.SameWeightCode(F, p["n"] or F.q - 1, p["k"])
    rep = SimReport("", {}, seed)
    if (p["info"] is None) == (p["received"] is None):
        raise ConfigError("give exactly one of info or received")
    if p["info"] is not None:
        c = code.encode(p["info"])
        rep.rows = [{"position": i, "symbol": s} for i, s in enumerate(c)]
        rep.add("max_multiplicity", code.max_multiplicity(c))
    else:
        info = code.decode(p["received"], p["erasures"])
        rep.rows = [{"position": i, "info": s} for i, s in enumerate(info)]
    rep.add("nb_correctable", con.nb_correctable(code.n, code.k))
    return rep


# defect memories
MATCHER = dict(matcher=Param("str", "one", "one|two|parity|identity|kt|rs-symbol|linear"),
               n=Param("int", 7), k=Param("int", None), alpha=Param("int", 3), q=Param("int", 8),
               delta=Param("int", 0), G=Param("json", None))


def _matcher(p, seed):
    kind = p["matcher"]
    if kind == "one":
        return dfx.one_defect(p["n"])
    if kind == "two":
        return dfx.two_defect(p["alpha"])
    if kind == "parity":
        return dfx.ParityMatcher(p["n"])
    if kind == "identity":
        return dfx.identity_matcher(p["n"])
    if kind == "kt":
        return dfx.kt_random(p["n"], p["k"] if p["k"] is not None else p["n"] - 4, seed)
    if kind == "rs-symbol":
        if p["k"] is None:
            raise ConfigError("rs-symbol needs k")
        return dfx.rs_symbol_matcher(field_for(p["q"]), p["n"], p["k"], p["delta"])
    if kind == "linear":
        if p["G"] is None:
            raise ConfigError("linear needs a systematic G")
        return dfx.linear_matcher(p["G"])
    raise ConfigError(f"unknown matcher {kind!r}")


def _defects(p) -> list:
    if (p["image"] is None) == (p["defects"] is None):
        raise ConfigError("give exactly one of image or defects")
    if p["image"] is not None:
        return dfx.parse_image(p["image"])
    d = p["defects"]
    if not isinstance(d, list) or any(x is not None and (isinstance(x, bool) or not isinstance(x, int)) for x in d):
        raise ConfigError("defects must be a list of stuck values or null")
    return d


@command("defects write", "Defect-compatible stored word for the information.",
         **MATCHER, info=Param("ints"), image=Param("str", None), defects=Param("json", None))
def _defects_write(p, seed):
    mt = _matcher(p, seed)
    d = _defects(p)
    stored = mt.write(p["info"], d)
    rows = [{"position": i, "defect": "." if s is None else s, "stored": v} for i, (s, v) in enumerate(zip(d, stored))]
    rep = SimReport("", {}, seed, rows=rows)
    rep.add("rate", mt.rate)
    rep.add("capability", mt.capability)
    return rep


@command("defects read", "Information carried by a stored word.", **MATCHER, stored=Param("ints"))
def _defects_read(p, seed):
    info = _matcher(p, seed).read(p["stored"])
    return SimReport("", {}, seed, rows=[{"position": i, "info": v} for i, v in enumerate(info)])


@command("defects sweep", "Write/read success with u random stuck cells per trial.",
         **MATCHER, u=Param("int", 1), trials=Param("int", 1000))
def _defects_sweep(p, seed):
    mt = _matcher(p, seed)
    if not 0 <= p["u"] <= mt.n:
        raise ConfigError("need 0 <= u <= n")
    alphabet = p["q"] if p["matcher"] == "rs-symbol" else 2
    rng = stream(seed, 1)
    ok = 0
    for _ in range(p["trials"]):
        d = [None] * mt.n
        for i in rng.choice(mt.n, p["u"], replace=False):
            d[int(i)] = int(rng.integers(0, alphabet))
        x = rng.integers(0, alphabet, mt.k).tolist()
        try:
            s = mt.write(x, d)
            ok += dfx.matches(s, d) and mt.read(s) == x
        except CodingError:
            pass
    rep = SimReport("", {}, seed)
    rep.add_proportion("success", ok, p["trials"])
    rep.add("capability", mt.capability)
    return rep


# biometric vaults
VAULT = dict(scheme=Param("str", "jw", "|".join(VAULT_SCHEMES)), q=Param("int", 8),
             poly=Param("str", None), n=Param("int", None), k=Param("int", 3))


@command("vault enroll", "Enroll a biometric; prints the public record as JSON.",
         **VAULT, biometric=Param("ints", REQUIRED, "symbol vector (syndrome, jw) or label set"))
def _vault_enroll(p, seed):
    code = _code(p)
    b = p["biometric"]
    s = p["scheme"]
    if s == "syndrome":
        rec = bio.syndrome_enroll(b, code)
    elif s == "jw":
        rec = bio.jw_enroll(b, code, seed)
    elif s == "jw-t":
        rec = bio.jw_fixed_t(b, code, seed)
    elif s == "js":
        rec = bio.js_enroll(b, code, seed)
    elif s == "js-dodis":
        rec = bio.js_improved_enroll(b, code, seed)
    else:
        raise ConfigError(f"unknown scheme {s!r}")
    return rec.to_json()


@command("vault auth", "Authenticate a biometric against an enrolled record (file path or JSON text).",
         record=Param("str"), q=Param("int", 8), poly=Param("str", None), biometric=Param("ints"))
def _vault_auth(p, seed):
    text = p["record"]
    if not text.lstrip().startswith("{"):
        try:
            with open(text, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as e:
            raise ConfigError(f"cannot read record: {e}") from None
    try:
        rec = bio.VaultRecord.from_json(text)
    except (ValueError, KeyError, TypeError):
        raise ConfigError("malformed vault record") from None
    code = _code({"q": p["q"], "poly": p["poly"], "n": rec.n, "k": rec.k})
    b = p["biometric"]
    if rec.scheme == "syndrome":
        try:
            secret = bio.syndrome_reconstruct(b, rec, code)
            res = bio.AuthResult(bio.ACCEPT, secret)
        except ReconstructFailure:
            res = bio.AuthResult(bio.REJECT)
    else:
        auth = {"jw": bio.jw_auth, "jw-t": bio.jw_fixed_t_auth, "js": bio.js_auth,
                "js-dodis": bio.js_improved_auth}.get(rec.scheme)
        if auth is None:
            raise ConfigError(f"unknown scheme {rec.scheme!r}")
        res = auth(rec, b, code)
    return SimReport("", {}, seed, rows=[{"accepted": int(res.accepted), "secret": _vec(res.secret or [])}])


# click wiring
def exit_code(err: Exception) -> int:
    """2 for configuration and parameter errors, 3 for decode and simulation errors."""
    return 2 if isinstance(err, (ValueError, OSError)) else 3


def _extra_params(args: list[str]) -> dict:
    out = {}
    i = 0
    while i < len(args):
        a = args[i]
        if not a.startswith("--") or len(a) < 3:
            raise ConfigError(f"unexpected argument {a!r}")
        key = a[2:]
        if "=" in key:
            key, val = key.split("=", 1)
        elif i + 1 < len(args) and not args[i + 1].startswith("--"):
            val = args[i + 1]
            i += 1
        else:
            val = "true"
        out[key.replace("-", "_")] = val
        i += 1
    return out


def execute(path: str, json_path, cli_args, seed, out, fmt, axis, grid) -> int:
    try:
        doc = {}
        if json_path:
            with open(json_path, encoding="utf-8") as fh:
                doc = json.load(fh)
            if not isinstance(doc, dict):
                raise ConfigError("--json must hold a JSON object")
        doc.update(_extra_params(cli_args))
        cfg = RunConfig(path, doc, seed, out, fmt)
        if axis is None and grid is not None:
            raise ConfigError("--grid needs --sweep")
        if axis is not None:
            p = COMMANDS[path].schema.get(axis)
            kind = p.kind if p is not None else "float"
            result = sweep(cfg, axis, parse_grid(grid or "", kind))
        else:
            result = run(cfg)
        text = render(result, fmt)
    except (CodingError, ValueError, OSError) as e:
        click.echo(f"error: {e}", err=True)
        return exit_code(e)
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)
    return 0


def _leaf(cmd: Command) -> click.Command:
    opts = "\n\n".join(f"--{k.replace('_', '-')} ({p.kind}"
                       + (", required" if p.default is REQUIRED else f", default {p.default}")
                       + (f"): {p.help}" if p.help else ")") for k, p in cmd.schema.items())

    @click.command(cmd.path.split()[-1], help=f"{cmd.help}\n\nParameters:\n\n{opts}",
                   context_settings={"ignore_unknown_options": True, "allow_extra_args": True})
    @click.option("--json", "json_path", type=click.Path(exists=True, dir_okay=False), help="JSON parameter document.")
    @click.option("--seed", type=click.IntRange(0, U64 - 1), default=0, show_default=True, help="Master seed (u64).")
    @click.option("--out", type=click.Path(dir_okay=False), help="Write the report here instead of stdout.")
    @click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv", show_default=True)
    @click.option("--sweep", "axis", help="Numeric parameter to sweep.")
    @click.option("--grid", help="Sweep values: 'a,b,c' or 'lo:hi:count'.")
    @click.pass_context
    def leaf(ctx, json_path, seed, out, fmt, axis, grid):
        ctx.exit(execute(cmd.path, json_path, list(ctx.args), seed, out, fmt, axis, grid))

    return leaf


@click.group(help=__doc__)
def main():
    pass


def _build():
    groups: dict[str, click.Group] = {}
    for path, cmd in COMMANDS.items():
        head = path.split()[0]
        if head not in groups:
            groups[head] = click.Group(head)
            main.add_command(groups[head])
        groups[head].add_command(_leaf(cmd))


_build()

if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
