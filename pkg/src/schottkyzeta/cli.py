"""Command-line driver: config ingestion, dispatch, CSV/JSON emission.

Commands
--------
spectrum    CSV of (word, trace, length) up to the configured cutoff.
zeta-eval   CSV grid of (Re s, Im s, Re Z, Im Z, log|Z|, tail_bound).
zeta-zeros  JSON zero certificates of det(I - L_s) in the configured region.
hausdorff   JSON {delta, delta_determinant, method_agreement}.
verify      JSON pass/fail reports: selberg-zeros | factorization | scattering
            | poisson | ladder | flow | dims.

Exit codes: 0 success, 1 invalid config/usage, 2 Schottky validation failure,
3 numerical failure.

Words are rendered with one lowercase letter per generator and the uppercase
letter for its inverse (rank <= 26).
"""

from __future__ import annotations

import argparse
import cmath
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from datetime import datetime, timezone

import numpy as np

try:
    import tomllib  # Python >= 3.11
except ModuleNotFoundError:  # pragma: no cover
    import tomli as tomllib

from . import boundary, sections, transfer, zerofind, zeta
from .errors import (
    ConfigError,
    NumericalError,
    SchottkyValidationError,
    SchottkyZetaError,
)
from .moebius import GEN_U_PLUS, GEN_V, GEN_X, MoebiusMap, UnitTangentPoint, exp_sl2, endpoint_maps, phi_pm
from .schottky import (
    Convention,
    LineDisk,
    SchottkyGroup,
    cylinder,
    funneled_torus,
    length_spectrum,
    pair_of_pants,
)

VERIFY_TARGETS = ("selberg-zeros", "factorization", "scattering", "poisson",
                  "ladder", "flow", "dims")
SURFACE_FREE_TARGETS = {"scattering", "poisson", "ladder", "flow", "dims"}


def word_to_str(word) -> str:
    out = []
    for s in word:
        ch = chr(ord("a") + abs(s) - 1)
        out.append(ch if s > 0 else ch.upper())
    return "".join(out)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


# -- config -------------------------------------------------------------------

_DEFAULT_OPTIONS = {
    "convention": "oriented",
    "k_max": 64,
    "p_max": 48,
    "basis_order": 20,
    "word_cap": 10 ** 7,
    "length_cutoff": 12.0,
    "seed": 0,
    "n_max": 2,
}


class RunConfig:
    def __init__(self, raw: dict, path: str):
        self.raw = raw
        self.path = path
        opts = dict(_DEFAULT_OPTIONS)
        extra = raw.get("options", {})
        if not isinstance(extra, dict):
            raise ConfigError("options: expected a table")
        opts.update(extra)
        for key in ("k_max", "p_max", "basis_order", "word_cap", "n_max"):
            if not isinstance(opts[key], int) or opts[key] <= 0:
                raise ConfigError(f"options.{key}: expected a positive integer")
        if opts["length_cutoff"] <= 0:
            raise ConfigError("options.length_cutoff: expected a positive number")
        try:
            self.convention = Convention(opts["convention"])
        except ValueError:
            raise ConfigError(
                f"options.convention: {opts['convention']!r} is not oriented|unoriented")
        self.options = opts
        self.region = self._parse_region(raw.get("region", {}))
        out = raw.get("output", {})
        self.out_dir = out.get("path", "out")
        self.out_format = out.get("format", None)
        self._surface = None

    @staticmethod
    def _parse_region(raw) -> dict:
        region = {"re": (-3.0, 2.0), "im": (-10.0, 10.0),
                  "grid_re": 20, "grid_im": 20,
                  "function": "selberg", "method": "euler"}
        region.update(raw)
        for key in ("re", "im"):
            v = region[key]
            if not (isinstance(v, (list, tuple)) and len(v) == 2 and v[0] < v[1]):
                raise ConfigError(f"region.{key}: expected [low, high] with low < high")
            region[key] = (float(v[0]), float(v[1]))
        if region["function"] not in ("selberg", "ruelle"):
            raise ConfigError("region.function: expected selberg|ruelle")
        if region["method"] not in ("euler", "determinant"):
            raise ConfigError("region.method: expected euler|determinant")
        return region

    def surface(self) -> SchottkyGroup:
        if self._surface is not None:
            return self._surface
        raw = self.raw.get("surface")
        if raw is None:
            raise ConfigError("surface: section missing")
        has_preset = "preset" in raw
        has_matrices = "generators" in raw
        if has_preset == has_matrices:
            raise ConfigError("surface: give exactly one of preset/generators")
        if has_preset:
            name = raw["preset"]
            params = raw.get("params", [])
            builders = {
                "pair-of-pants": (pair_of_pants, 3),
                "funneled-torus": (funneled_torus, 3),
                "cylinder": (cylinder, 1),
            }
            if name not in builders:
                raise ConfigError(f"surface.preset: unknown preset {name!r}")
            fn, arity = builders[name]
            if len(params) != arity:
                raise ConfigError(f"surface.params: {name} takes {arity} numbers")
            group = fn(*map(float, params))
        else:
            gens = []
            for k, m in enumerate(raw["generators"]):
                try:
                    gens.append(MoebiusMap(m[0][0], m[0][1], m[1][0], m[1][1]))
                except (TypeError, IndexError, ValueError) as e:
                    raise ConfigError(f"surface.generators[{k}]: {e}")
            if "disks" in raw:
                d = raw["disks"]
                try:
                    pos = tuple(LineDisk(float(c), float(r)) for c, r in d["pos"])
                    neg = tuple(LineDisk(float(c), float(r)) for c, r in d["neg"])
                except (KeyError, TypeError, ValueError) as e:
                    raise ConfigError(f"surface.disks: {e}")
                group = SchottkyGroup(tuple(gens), pos, neg)
            else:
                group = SchottkyGroup.from_generators(gens)
        group.ensure_valid()
        self._surface = group
        return group

    def spectrum(self):
        return length_spectrum(self.surface(), self.options["length_cutoff"],
                               self.convention, word_cap=self.options["word_cap"])


def load_config(path: str | None, needed: bool) -> RunConfig | None:
    if path is None:
        if needed:
            raise ConfigError("--config: required for this command")
        return None
    if not os.path.exists(path):
        raise ConfigError(f"--config: no such file {path}")
    with open(path, "rb") as fh:
        try:
            raw = tomllib.load(fh)
        except tomllib.TOMLDecodeError as e:
            raise ConfigError(f"--config: {e}")
    return RunConfig(raw, path)


# -- output helpers -------------------------------------------------------------

def _write_text(out_dir: str, name: str, text: str, timestamp: bool) -> str:
    os.makedirs(out_dir, exist_ok=True)
    path = os.path.join(out_dir, name)
    header = ""
    if timestamp:
        stamp = datetime.now(timezone.utc).isoformat(timespec="seconds")
        header = f"# generated {stamp}\n"
    with open(path, "w") as fh:
        fh.write(header + text)
    return path


def _json_text(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, allow_nan=False) + "\n"


def _fmt(x: float) -> str:
    return f"{x:.17g}"


# -- commands -------------------------------------------------------------------

def cmd_spectrum(cfg: RunConfig, args) -> str:
    spec = cfg.spectrum()
    lines = ["word,trace,length"]
    for g in spec.geodesics:
        lines.append(f"{word_to_str(g.word)},{_fmt(g.trace)},{_fmt(g.length)}")
    return _write_text(args.out or cfg.out_dir, "spectrum.csv",
                       "\n".join(lines) + "\n", not args.no_timestamp)


def _grid_points(cfg: RunConfig):
    (re0, re1), (im0, im1) = cfg.region["re"], cfg.region["im"]
    res = np.linspace(re0, re1, cfg.region["grid_re"])
    ims = np.linspace(im0, im1, cfg.region["grid_im"])
    return [complex(a, b) for b in ims for a in res]


def cmd_zeta_eval(cfg: RunConfig, args) -> str:
    pts = _grid_points(cfg)
    fn = cfg.region["function"]
    method = cfg.region["method"]
    k_max = cfg.options["k_max"]
    N = cfg.options["basis_order"]

    if method == "euler":
        spec = cfg.spectrum()
        evaluate = zeta.selberg_zeta if fn == "selberg" else zeta.ruelle_zeta

        def one(s):
            z = evaluate(s, spec, k_max)
            return z.value, z.tail_bound
    else:
        group = cfg.surface()
        p_max = cfg.options["p_max"]

        def one(s):
            # truncation proxy from the geometric column decay of the blocks
            tm = transfer.build_transfer_matrix(group, s, N)
            ratio = tm.column_decay_ratio()
            tail = ratio ** N / (1.0 - ratio) if ratio < 1.0 else math.inf
            if fn == "selberg":
                dim = tm.matrix.shape[0]
                sign, logabs = np.linalg.slogdet(np.eye(dim) - tm.matrix)
            else:
                # Z_X(s) as the product of shifted determinants
                sign, logabs = 1.0 + 0.0j, 0.0
                for p in range(1, p_max + 1):
                    sg, la = transfer.fredholm_det_log(group, s + p, N)
                    sign *= sg
                    logabs += la
            val = complex(sign) * math.exp(min(max(logabs, -700.0), 700.0))
            return val, tail

    with ThreadPoolExecutor(max_workers=args.threads) as pool:
        rows = list(pool.map(one, pts))
    lines = ["re_s,im_s,re_z,im_z,log_abs_z,tail_bound"]
    for s, (v, tail) in zip(pts, rows):
        logabs = math.log(abs(v)) if v != 0 else float("-inf")
        lines.append(",".join([_fmt(s.real), _fmt(s.imag), _fmt(v.real),
                               _fmt(v.imag), _fmt(logabs), _fmt(tail)]))
    return _write_text(args.out or cfg.out_dir, "zeta_eval.csv",
                       "\n".join(lines) + "\n", not args.no_timestamp)


def cmd_zeta_zeros(cfg: RunConfig, args) -> str:
    group = cfg.surface()
    (re0, re1), (im0, im1) = cfg.region["re"], cfg.region["im"]
    certs = transfer.locate_zeros(group, (re0, re1, im0, im1),
                                  N=cfg.options["basis_order"])
    payload = [{"center_re": c.center.real, "center_im": c.center.imag,
                "radius": c.radius, "winding": c.winding,
                "min_modulus_on_circle": c.min_modulus_on_circle,
                "method": c.method} for c in certs]
    return _write_text(args.out or cfg.out_dir, "zeta_zeros.json",
                       _json_text(payload), not args.no_timestamp)


def cmd_hausdorff(cfg: RunConfig, args) -> str:
    group = cfg.surface()
    N = cfg.options["basis_order"]
    d_eig = transfer.hausdorff_dimension(group, tol=1e-9, N=N)
    d_det = transfer.hausdorff_dimension_det(group, tol=1e-9, N=N)
    payload = {"delta": d_eig, "delta_determinant": d_det,
               "method_agreement": abs(d_eig - d_det)}
    return _write_text(args.out or cfg.out_dir, "hausdorff.json",
                       _json_text(payload), not args.no_timestamp)


# -- verify targets -------------------------------------------------------------

def _verify_selberg_zeros(cfg: RunConfig, args) -> dict:
    group = cfg.surface()
    report = zerofind.verify_topological_zeros(group, cfg.options["n_max"],
                                               N=cfg.options["basis_order"])
    report["target"] = "selberg-zeros"
    report["pass"] = all(e["pass"] for e in report["entries"]) \
        if all(e["pass"] is not None for e in report["entries"]) else None
    return report


def _verify_factorization(cfg: RunConfig, args) -> dict:
    spec = cfg.spectrum()
    group = cfg.surface()
    delta = transfer.hausdorff_dimension(group, tol=1e-6,
                                         N=cfg.options["basis_order"])
    rng = np.random.default_rng(cfg.options["seed"])
    entries = []
    for _ in range(10):
        lam = complex(delta + 0.5 + rng.uniform(0.0, 1.5), rng.uniform(-2, 2))
        res = zeta.factorization_check(lam, spec, cfg.options["p_max"],
                                       cfg.options["k_max"])
        entries.append({"lambda_re": lam.real, "lambda_im": lam.imag,
                        "residual": res, "tol": 1e-8, "pass": bool(res < 1e-8)})
    return {"target": "factorization", "delta": delta, "entries": entries,
            "pass": all(e["pass"] for e in entries)}


def _verify_scattering(cfg, args) -> dict:
    rng = np.random.default_rng(0 if cfg is None else cfg.options["seed"])
    worst = 0.0
    tested = 0
    while tested < 50:
        s = complex(rng.uniform(-4, 4), rng.uniform(-4, 4))
        if abs(s.imag) < 0.05:
            continue
        tested += 1
        for k in range(33):
            r = abs(boundary.scattering_multiplier(s, k)
                    * boundary.scattering_multiplier(1 - s, k) - 1.0)
            worst = max(worst, r)
    refl = 0.0
    from .special import reflection_residual
    for re in np.linspace(-3.3, 3.7, 15):
        for im in np.linspace(-2.5, 2.5, 11):
            z = complex(re, im)
            if abs(im) < 1e-9 and abs(re - round(re)) < 1e-9:
                continue
            refl = max(refl, reflection_residual(z))
    return {"target": "scattering",
            "functional_equation_sup": worst, "functional_equation_tol": 1e-10,
            "reflection_max": refl, "reflection_tol": 1e-12,
            "pass": bool(worst < 1e-10 and refl < 1e-12)}


def _verify_poisson(cfg, args) -> dict:
    rng = np.random.default_rng(0 if cfg is None else cfg.options["seed"])
    harm = []
    for lam, omega in ((0.0, boundary.FourierDistribution.constant()),
                       (1.0, boundary.FourierDistribution.mode(1)),
                       (-0.5 + 2.0j, boundary.FourierDistribution.random_real(rng, 3))):
        r = boundary.harmonicity_residual(lam, omega, 0.3, h=1e-3)
        harm.append({"lambda_re": complex(lam).real, "lambda_im": complex(lam).imag,
                     "residual": r, "pass": bool(r < 1e-4)})
    g = MoebiusMap(2.0, 1.0, 1.0, 1.0)
    eq = boundary.equivariance_residual(0.7, boundary.FourierDistribution.mode(1), g, 0.2)
    kernel_zero = max(boundary.kernel_check_Pn(n, k)
                      for n in range(1, 5) for k in range(n, 9))
    kernel_pos = min(boundary.kernel_check_Pn(n, k)
                     for n in range(1, 5) for k in range(-n + 1, n))
    ok = (all(h["pass"] for h in harm) and eq < 1e-9
          and kernel_zero < 1e-12 and kernel_pos > 1e-3)
    return {"target": "poisson", "harmonicity": harm,
            "equivariance_residual": eq, "equivariance_tol": 1e-9,
            "kernel_annihilated_max": kernel_zero, "kernel_surviving_min": kernel_pos,
            "pass": bool(ok)}


def _verify_ladder(cfg, args) -> dict:
    entries = []
    ok = True
    for n in (1, 2, 3):
        try:
            rungs = sections.ladder_build(n, 6)
            comm = all(sections.vertical_eigenvalue_check(u) for u in rungs)
            entries.append({"n": n, "rungs": len(rungs), "lowering": True,
                            "commutator": bool(comm)})
            ok = ok and comm
        except SchottkyZetaError as e:  # pragma: no cover
            entries.append({"n": n, "error": str(e)})
            ok = False
    pi11 = sections.ladder_norm_ratio(1, 1)[0]
    pi22 = sections.ladder_norm_ratio(2, 2)[0]
    ok = ok and pi11 == 2 and pi22 == 10
    return {"target": "ladder", "entries": entries,
            "pi_1_1": str(pi11), "pi_2_2": str(pi22), "pass": bool(ok)}


def _verify_flow(cfg, args) -> dict:
    rng = np.random.default_rng(0 if cfg is None else cfg.options["seed"])
    worst_cocycle = worst_endpoint = worst_equiv = 0.0
    for _ in range(100):
        r = math.sqrt(rng.uniform(0, 0.64))
        a = rng.uniform(0, 2 * math.pi)
        y = UnitTangentPoint.from_coords(r * cmath.exp(1j * a), rng.uniform(0, 2 * math.pi))
        t = rng.uniform(-2, 2)
        fm0, fp0 = phi_pm(y)
        yt = y.flow("X", t)
        fm1, fp1 = phi_pm(yt)
        worst_cocycle = max(worst_cocycle,
                            abs(fp1 - math.exp(t) * fp0) / fp1,
                            abs(fm1 - math.exp(-t) * fm0) / max(fm1, 1e-300))
        bm0, bp0 = endpoint_maps(y)
        bm1, bp1 = endpoint_maps(yt)
        worst_endpoint = max(worst_endpoint, abs(bm0.point - bm1.point),
                             abs(bp0.point - bp1.point))
        gamma = (exp_sl2(GEN_X, rng.uniform(-1, 1))
                 .compose(exp_sl2(GEN_U_PLUS, rng.uniform(-1, 1)))
                 .compose(exp_sl2(GEN_V, rng.uniform(0, 2 * math.pi))))
        fmg, fpg = phi_pm(y.translate(gamma))
        worst_equiv = max(
            worst_equiv,
            abs(fpg - fp0 / gamma.boundary_derivative(bp0)) / fpg,
            abs(fmg - fm0 / gamma.boundary_derivative(bm0)) / max(fmg, 1e-300))
    ok = worst_cocycle < 1e-9 and worst_endpoint < 1e-10 and worst_equiv < 1e-9
    return {"target": "flow", "samples": 100,
            "cocycle_worst": worst_cocycle, "cocycle_tol": 1e-9,
            "endpoint_invariance_worst": worst_endpoint, "endpoint_tol": 1e-10,
            "equivariance_worst": worst_equiv, "equivariance_tol": 1e-9,
            "pass": bool(ok)}


def _verify_dims(cfg, args) -> dict:
    entries = []
    ok = True
    for genus in range(2, 6):
        for n in range(1, 7):
            got = zerofind.dim_Hn(zerofind.Compact(genus), n)
            want = genus if n == 1 else (2 * n - 1) * (genus - 1)
            entries.append({"surface": f"compact-genus-{genus}", "n": n,
                            "dim": got, "expected": want})
            ok = ok and got == want
    for chi in range(-1, -5, -1):
        for n in range(1, 7):
            got = zerofind.dim_Hn(zerofind.ConvexCocompact(chi), n)
            want = abs(chi) + 1 if n == 1 else (2 * n - 1) * abs(chi)
            entries.append({"surface": f"convex-cocompact-chi-{chi}", "n": n,
                            "dim": got, "expected": want})
            ok = ok and got == want
    return {"target": "dims", "entries": entries, "pass": bool(ok)}


_VERIFY_DISPATCH = {
    "selberg-zeros": _verify_selberg_zeros,
    "factorization": _verify_factorization,
    "scattering": _verify_scattering,
    "poisson": _verify_poisson,
    "ladder": _verify_ladder,
    "flow": _verify_flow,
    "dims": _verify_dims,
}


def cmd_verify(cfg: RunConfig | None, args) -> str:
    report = _VERIFY_DISPATCH[args.target](cfg, args)
    out_dir = args.out or (cfg.out_dir if cfg else "out")
    name = f"verify_{args.target.replace('-', '_')}.json"
    return _write_text(out_dir, name, _json_text(report), not args.no_timestamp)


# -- entry point ----------------------------------------------------------------

def build_parser() -> _Parser:
    p = _Parser(prog="schottkyzeta", description=__doc__,
                formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--config", help="TOML run configuration")
    p.add_argument("--out", help="output directory (overrides config)")
    p.add_argument("--format", choices=("csv", "json"),
                   help="accepted for compatibility; each command has a native format")
    p.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    p.add_argument("--no-timestamp", action="store_true",
                   help="omit the generated-at header line")
    sub = p.add_subparsers(dest="command", required=True)
    for name in ("spectrum", "zeta-eval", "zeta-zeros", "hausdorff"):
        sub.add_parser(name)
    v = sub.add_parser("verify")
    v.add_argument("target", choices=VERIFY_TARGETS)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        needs_config = args.command != "verify" or args.target not in SURFACE_FREE_TARGETS
        cfg = load_config(args.config, needed=needs_config)
        if args.threads is not None and args.threads < 1:
            raise ConfigError("--threads: must be >= 1")
        dispatch = {
            "spectrum": cmd_spectrum,
            "zeta-eval": cmd_zeta_eval,
            "zeta-zeros": cmd_zeta_zeros,
            "hausdorff": cmd_hausdorff,
            "verify": cmd_verify,
        }
        path = dispatch[args.command](cfg, args)
        print(path)
        return 0
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return 1
    except SchottkyValidationError as e:
        print(f"schottky validation failed: {type(e).__name__}: {e}", file=sys.stderr)
        return 2
    except NumericalError as e:
        print(f"numerical failure: {type(e).__name__}: {e}", file=sys.stderr)
        return 3


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
