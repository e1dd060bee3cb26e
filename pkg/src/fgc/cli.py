"""Command-line interface: ``fgc <subcommand> [flags]``.

Exit codes: 0 success, 1 usage or I/O error, 2 mathematically invalid input.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from .capacity import capacity_curve, curve_csv
from .channels import (
    GaussianChannel,
    apply,
    channel_from_json,
    choi_cm,
    choi_rank_modes,
    complement,
    dilation,
    standard_form,
    validate,
)
from .degradability import classify
from .errors import FGCError, InvalidChannel, InvalidCM, NotAntisymmetric, OutOfRange, TooManyModes
from .fock import apply_channel_dense, cm_from_state, entropy_dense, state_from_cm
from .linalg import max_abs
from .sampling import random_channel, random_cm
from .states import cm_to_json, entropy_bits

EXIT_OK, EXIT_USAGE, EXIT_INVALID = 0, 1, 2
ORACLE_MAX_MODES = 3
ORACLE_TOL = 1e-8


class UsageError(Exception):
    pass


def _load_channel(path: str) -> GaussianChannel:
    try:
        with open(path) as fh:
            obj = json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: malformed JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    try:
        return channel_from_json(obj)
    except NotAntisymmetric:
        raise
    except FGCError as exc:
        raise UsageError(f"{path}: {exc}") from None


def _emit(obj, compact: bool = False) -> None:
    print(json.dumps(obj, indent=None if compact else 2))


def _require_valid(T: GaussianChannel) -> None:
    valid, min_eig = validate(T)
    if not valid:
        raise InvalidChannel(f"channel is not completely positive (min eigenvalue {min_eig:.3e})")


def cmd_validate(args) -> int:
    try:
        T = _load_channel(args.path)
    except NotAntisymmetric as exc:
        _emit({"valid": False, "min_eig": None, "error": str(exc)})
        return EXIT_INVALID
    valid, min_eig = validate(T)
    _emit({"valid": bool(valid), "min_eig": float(min_eig)})
    return EXIT_OK if valid else EXIT_INVALID


def cmd_classify(args) -> int:
    T = _load_channel(args.path)
    _require_valid(T)
    _emit(classify(T).to_json(), compact=args.json)
    return EXIT_OK


def cmd_capacity(args) -> int:
    rows = capacity_curve(args.t_min, args.t_max, args.steps)
    text = curve_csv(rows)
    if args.out:
        try:
            with open(args.out, "w", newline="\n") as fh:
                fh.write(text)
        except OSError as exc:
            raise UsageError(f"cannot write {args.out}: {exc.strerror}") from None
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("FGC_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"FGC_SEED={env!r} is not an integer") from None


def oracle_check(modes: int, trials: int, seed: int) -> dict:
    """Compare Gaussian and dense channel action on random channels and inputs."""
    if modes > ORACLE_MAX_MODES:
        raise TooManyModes(f"oracle check supports at most {ORACLE_MAX_MODES} modes")
    if modes < 1 or trials < 1:
        raise OutOfRange("modes and trials must be positive")
    rng = np.random.default_rng(seed)
    cm_dev = ent_dev = 0.0
    for _ in range(trials):
        T = random_channel(modes, modes, rng)
        gamma = random_cm(modes, rng)
        rho = apply_channel_dense(T, state_from_cm(gamma))
        out = apply(T, gamma)
        cm_dev = max(cm_dev, max_abs(cm_from_state(rho) - out))
        ent_dev = max(ent_dev, abs(entropy_dense(rho) - entropy_bits(out)))
    return {
        "modes": modes,
        "trials": trials,
        "seed": seed,
        "max_cm_deviation": cm_dev,
        "max_entropy_deviation": ent_dev,
        "tolerance": ORACLE_TOL,
        "pass": bool(cm_dev < ORACLE_TOL and ent_dev < ORACLE_TOL),
    }


def cmd_oracle_check(args) -> int:
    summary = oracle_check(args.modes, args.trials, _seed(args))
    _emit(summary)
    return EXIT_OK if summary["pass"] else EXIT_INVALID


def cmd_standard_form(args) -> int:
    T = _load_channel(args.path)
    _require_valid(T)
    sf = standard_form(T)
    _emit({"O1": sf.O1.tolist(), "O2": sf.O2.tolist(), "d": sf.d.tolist(), "B_std": sf.B_std.tolist()})
    return EXIT_OK


def cmd_complement(args) -> int:
    T = _load_channel(args.path)
    _require_valid(T)
    _emit(complement(T).to_json())
    return EXIT_OK


def cmd_dilate(args) -> int:
    T = _load_channel(args.path)
    _require_valid(T)
    dil = dilation(T)
    _emit(
        {
            "O_SE": dil.O_SE.tolist(),
            "gamma_E": cm_to_json(dil.gamma_E),
            "pure_env_modes": dil.pure_env_modes,
            "B_prime": dil.B_prime.tolist(),
        }
    )
    return EXIT_OK


def cmd_choi(args) -> int:
    T = _load_channel(args.path)
    _require_valid(T)
    out = {"cm": cm_to_json(choi_cm(T))}
    if T.is_square:
        out["choi_rank"] = choi_rank_modes(T)
    _emit(out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fgc", description="Fermionic Gaussian channel toolkit")
    sub = p.add_subparsers(dest="command", required=True)

    def with_path(name, func, help_):
        s = sub.add_parser(name, help=help_)
        s.add_argument("path", help="channel JSON file")
        s.set_defaults(func=func)
        return s

    with_path("validate", cmd_validate, "check complete positivity")
    s = with_path("classify", cmd_classify, "degradability classification")
    s.add_argument("--json", action="store_true", help="single-line JSON output")
    with_path("standard-form", cmd_standard_form, "SVD standard form")
    with_path("complement", cmd_complement, "complementary channel")
    with_path("dilate", cmd_dilate, "pure-environment dilation")
    with_path("choi", cmd_choi, "Choi state CM and Choi rank")

    s = sub.add_parser("capacity", help="lossy-channel capacity curve as CSV")
    s.add_argument("--t-min", type=float, default=0.5)
    s.add_argument("--t-max", type=float, default=1.0)
    s.add_argument("--steps", type=int, default=51)
    s.add_argument("--out", default=None, help="CSV path (stdout if omitted)")
    s.set_defaults(func=cmd_capacity)

    s = sub.add_parser("oracle-check", help="dense Fock-space cross-check")
    s.add_argument("--modes", type=int, default=1)
    s.add_argument("--trials", type=int, default=10)
    s.add_argument("--seed", type=int, default=None, help="defaults to $FGC_SEED, then 0")
    s.set_defaults(func=cmd_oracle_check)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"fgc: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OutOfRange, TooManyModes) as exc:
        print(f"fgc: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (InvalidChannel, InvalidCM, NotAntisymmetric) as exc:
        print(f"fgc: invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except FGCError as exc:
        print(f"fgc: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
