"""Command-line batch driver.

Every subcommand writes JSON lines (one object per check, then a summary
object) to ``--output`` (stdout by default) and a short text summary to
stderr. Exit status: 0 when every check passes, 1 on a failed check, 2 on
malformed input.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import epr, hilbert, instruments, lattice, spacetime
from .instruments import Instrument, NonCommutingError
from .serialize import FormatError, load_json, scenario_from_json
from .tolerances import DEFAULT, Tolerances, current, using

DATA = Path(__file__).parent / "data"

TOL_FLAGS = ("herm", "idem", "num", "psd", "tr", "zero", "rank")

# acceptance-level tolerances for the verification suites
CHECK_TOL = 1e-10
PROB_TOL = 1e-12
NEGATIVE_CONTROL_MIN = 1e-3
INTERVAL_TOL = 1e-9


def trial_seed(seed: int, k: int) -> int:
    """Derived 64-bit seed for trial k; ``default_rng(trial_seed(s, k))`` reproduces it."""
    ss = np.random.SeedSequence(seed, spawn_key=(k,))
    return int(ss.generate_state(1, np.uint64)[0])


def _run_trials(fn, seed: int, trials: int, jobs: int):
    seeds = [trial_seed(seed, k) for k in range(trials)]
    work = [(k, s) for k, s in enumerate(seeds)]
    if jobs > 1:
        tol = current()

        def call(ks):
            with using(tol):
                return fn(*ks)
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(call, work))
    return [fn(k, s) for k, s in work]


class Recorder:
    def __init__(self, args):
        self.args = args
        self.records = []

    def add(self, prop, passed, max_deviation=0.0, started=None, **extra):
        rec = {"property": prop, "pass": bool(passed),
               "max_deviation": float(max_deviation)}
        rec.update(extra)
        rec["elapsed_ms"] = round((time.perf_counter() - started) * 1000, 3) if started else 0.0
        self.records.append(rec)
        return rec

    def aggregate(self, prop, results, started, tol, greater=False, **extra):
        """Fold per-trial (deviation, seed) pairs into one record."""
        devs = [r[0] for r in results]
        worst = int(np.argmax(devs)) if devs else 0
        dev = max(devs) if devs else 0.0
        if greater:
            passed = bool(devs) and min(devs) > tol
            worst = int(np.argmin(devs)) if devs else 0
            dev = min(devs) if devs else 0.0
        else:
            passed = dev <= tol
        rec = dict(extra)
        rec["tolerance"] = tol
        rec["trials"] = len(results)
        if not passed and results:
            rec["counterexample_seed"] = results[worst][1]
            rec["counterexample_trial"] = worst
        return self.add(prop, passed, dev, started, **rec)


# ---------------------------------------------------------------------------
# subcommands

def _resolve_lattice_path(name: str) -> Path:
    p = Path(name)
    if p.exists():
        return p
    for cand in (DATA / "lattices" / name, DATA / "lattices" / f"{name}.json"):
        if cand.exists():
            return cand
    raise FormatError("no such file or bundled lattice", name)


def _load_lattice(name):
    path = _resolve_lattice_path(name)
    spec = load_json(path)
    if not isinstance(spec, dict):
        raise FormatError("expected a JSON object", str(path))
    for key in ("n", "covers", "ortho"):
        if key not in spec:
            raise FormatError("missing field", f"{path}:{key}")
    if not isinstance(spec["n"], int):
        raise FormatError("must be an integer", f"{path}:n")
    if not isinstance(spec["covers"], list) or not isinstance(spec["ortho"], list):
        raise FormatError("must be a list", f"{path}:covers/ortho")
    return path, spec


def cmd_check_lattice(args, rec: Recorder):
    for name in args.files:
        path, spec = _load_lattice(name)
        t0 = time.perf_counter()
        try:
            L = lattice.lattice_from_dict(spec)
        except lattice.LatticeError as exc:
            rec.add("lattice_axioms", False, started=t0, file=path.name,
                    counterexample=list(exc.counterexample), detail=str(exc))
            continue
        rec.add("lattice_axioms", True, started=t0, file=path.name, n=L.n)
        for check in (lattice.check_orthomodular, lattice.check_de_morgan):
            t0 = time.perf_counter()
            r = check(L)
            rec.add(r.property, r.passed, started=t0, file=path.name,
                    counterexample=list(r.counterexample), detail=r.detail)
        t0 = time.perf_counter()
        om = lattice.check_orthomodular(L).passed
        r = lattice.check_commutes_symmetric(L)
        rec.add(r.property, r.passed or not om, started=t0, file=path.name,
                counterexample=list(r.counterexample),
                detail="" if om else "not orthomodular; symmetry not required")


def cmd_check_covering(args, rec: Recorder):
    for name in args.files:
        path, spec = _load_lattice(name)
        t0 = time.perf_counter()
        try:
            L = lattice.lattice_from_dict(spec)
        except lattice.LatticeError as exc:
            rec.add("lattice_axioms", False, started=t0, file=path.name,
                    counterexample=list(exc.counterexample), detail=str(exc))
            continue
        r = lattice.check_covering_law(L)
        rec.add(r.property, r.passed, started=t0, file=path.name,
                counterexample=list(r.counterexample), detail=r.detail,
                atoms=len(lattice.atoms(L)))
    for d in args.dims:
        t0 = time.perf_counter()
        s = trial_seed(args.seed, d)
        r = hilbert.covering_rank_check(d, args.trials, seed=s)
        extra = {"dim": d, "trials": args.trials, "skipped": r.skipped}
        if not r.passed:
            extra["counterexample_seed"] = s
            extra["failures"] = r.failures[:5]
        rec.add("covering_rank", r.passed, float(len(r.failures)), t0, **extra)


def _theorem_trial(d, kind, k, s):
    rng = np.random.default_rng(s)
    I, J = instruments.random_commuting_pair(d, rng, kind)
    p = hilbert.random_state(d, True, rng)
    e1 = instruments.verify_eq1(I, J, p, CHECK_TOL).max_deviation
    e2 = instruments.verify_eq2(I, J, [p], CHECK_TOL).max_deviation
    e34 = instruments.verify_eq3_eq4(I, J, p, CHECK_TOL).max_deviation
    return (e1, s), (e2, s), (e34, s)


def negative_control() -> float:
    """Order asymmetry of conjugate qubit bases on |0>; must be large."""
    I = Instrument.computational(2, "Z")
    H = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
    J = Instrument.from_basis(H, label="X")
    p = hilbert.DensityState.from_vector([1, 0])
    return instruments.verify_eq3_eq4(I, J, p, CHECK_TOL,
                                      require_commuting=False).max_deviation


def cmd_verify_theorem(args, rec: Recorder):
    kinds = ["tensor", "block"] if args.kind == "both" else [args.kind]
    for d in args.dims:
        if "tensor" in kinds and d not in instruments.SPLITS:
            raise FormatError(f"no tensor split for d={d}; use --kind block", "--dim")
        t0 = time.perf_counter()
        base = trial_seed(args.seed, d)
        res = _run_trials(lambda k, s: _theorem_trial(d, kinds[k % len(kinds)], k, s),
                          base, args.trials, args.jobs)
        for idx, prop in enumerate(("eq1_frequency_factorization",
                                    "eq2_collapse_composition",
                                    "eq3_eq4_order_symmetry")):
            rec.aggregate(prop, [r[idx] for r in res], t0, CHECK_TOL, dim=d,
                          generators=kinds, seed=base)
    t0 = time.perf_counter()
    dev = negative_control()
    rec.add("negative_control_noncommuting", dev > NEGATIVE_CONTROL_MIN, dev, t0,
            threshold=NEGATIVE_CONTROL_MIN)


def _nosig_trial(d, k, s):
    """Random commuting pair plus three more remote instruments commuting with I."""
    rng = np.random.default_rng(s)
    p = hilbert.random_state(d, True, rng)
    if k % 2 == 0 and d in instruments.SPLITS:
        d1, d2 = instruments.SPLITS[d]
        W = hilbert.random_unitary(d, rng)
        sp = epr.TensorSplit(d1, d2)
        I = sp.lift1(instruments.random_instrument(d1, rng), "I").conjugate(W)
        remotes = [sp.lift2(instruments.random_instrument(d2, rng), "J").conjugate(W)
                   for _ in range(4)]
    else:
        W = hilbert.random_unitary(d, rng)
        n = int(rng.integers(2, d + 1))
        I = Instrument.from_basis(W, instruments.random_partition(rng, d, n), "I")
        remotes = [Instrument.from_basis(
            W, instruments.random_partition(rng, d, int(rng.integers(2, d + 1))), "J")
            for _ in range(4)]
    r = instruments.no_signaling_check(I, remotes[0], p, CHECK_TOL, remotes[1:])
    return r.max_deviation, s


def singlet_no_signaling(seed: int, settings: int = 20) -> float:
    rng = np.random.default_rng(seed)
    s = epr.singlet_state()
    I = epr.polarizer_instrument("linear", float(rng.uniform(0, np.pi)), arm=1)
    remotes = [epr.polarizer_instrument("linear", float(rng.uniform(0, np.pi)), arm=2)
               for _ in range(settings - 1)]
    remotes.append(epr.polarizer_instrument("circular", arm=2))
    r = instruments.no_signaling_check(I, remotes[0], s, PROB_TOL, remotes[1:])
    half = float(np.abs(np.array(r.details["local_marginal"]) - 0.5).max())
    return max(r.max_deviation, half)


def cmd_no_signaling(args, rec: Recorder):
    t0 = time.perf_counter()
    dev = singlet_no_signaling(trial_seed(args.seed, 0))
    rec.add("no_signaling_singlet", dev <= PROB_TOL, dev, t0, tolerance=PROB_TOL,
            remote_settings=20)
    for d in args.dims:
        t0 = time.perf_counter()
        base = trial_seed(args.seed, d)
        res = _run_trials(lambda k, s: _nosig_trial(d, k, s), base, args.trials,
                          args.jobs)
        rec.aggregate("no_signaling_random_pairs", res, t0, CHECK_TOL, dim=d,
                      seed=base)


def _frame_trial(k, s):
    rng = np.random.default_rng(s)
    split = [(2, 2), (2, 3), (3, 3)][k % 3]
    sc = spacetime.random_scenario(rng, split)
    r = spacetime.frame_consistency(sc.I, sc.J, sc.state, sc.frames, CHECK_TOL)
    kinds = sorted(set(r.details["descriptions"]))
    return r.max_deviation, s, kinds


def _geometry_trial(k, s):
    rng = np.random.default_rng(s)
    kind = "spacelike" if k % 2 == 0 else "timelike"
    O1, O2 = spacetime.random_region_pair(rng, kind)
    v = spacetime.reordering_boost(O1, O2)
    ok = True
    if kind == "spacelike":
        if v is None or not abs(v) < 1:
            ok = False
        else:
            g = spacetime.FrameTransform.boost(v)
            c = g.apply(np.vstack([O1.center, O2.center]))
            rest = np.sign(O2.center[0] - O1.center[0]) or 1.0
            ok = np.sign(c[1, 0] - c[0, 0]) == -rest
    else:
        ok = v is None
    # interval invariance on corner events under a random boost
    g = spacetime.FrameTransform.boost(float(rng.uniform(-0.99, 0.99)))
    a, b = O1.corners(), O2.corners()
    ga, gb = g.apply(a), g.apply(b)
    inv = max(abs(spacetime.minkowski_interval(x, y)
                  - spacetime.minkowski_interval(gx, gy))
              for x, gx in zip(a, ga) for y, gy in zip(b, gb))
    return ok, inv, s


def cmd_frame_consistency(args, rec: Recorder):
    if args.scenario:
        for name in args.scenario:
            path = Path(name)
            if not path.exists() and (DATA / "scenarios" / name).exists():
                path = DATA / "scenarios" / name
            sc = scenario_from_json(load_json(path))
            t0 = time.perf_counter()
            try:
                r = spacetime.frame_consistency(sc.I, sc.J, sc.state, sc.frames,
                                                CHECK_TOL)
            except (spacetime.NotSpacelikeError, spacetime.S2Violation) as exc:
                rec.add("frame_consistency", False, started=t0, file=path.name,
                        error=type(exc).__name__, detail=str(exc))
                continue
            rec.add(r.property, r.passed, r.max_deviation, t0, file=path.name,
                    tolerance=CHECK_TOL, descriptions=r.details["descriptions"])
    if args.trials:
        t0 = time.perf_counter()
        base = trial_seed(args.seed, 0)
        res = _run_trials(_frame_trial, base, args.trials, args.jobs)
        rec.aggregate("frame_consistency_random", [(r[0], r[1]) for r in res], t0,
                      CHECK_TOL, seed=base)
        t0 = time.perf_counter()
        all_three = [(0.0 if r[2] == ["I_first", "J_first", "simultaneous"] else 1.0,
                      r[1]) for r in res]
        rec.aggregate("frame_descriptions_cover_both_orders", all_three, t0, 0.0)
        t0 = time.perf_counter()
        geo_base = trial_seed(args.seed, 1)
        geo = _run_trials(_geometry_trial, geo_base, args.geometry_trials, args.jobs)
        rec.aggregate("reordering_boost", [(0.0 if g[0] else 1.0, g[2]) for g in geo],
                      t0, 0.0, seed=geo_base)
        rec.aggregate("corner_interval_invariance", [(g[1], g[2]) for g in geo], t0,
                      INTERVAL_TOL, seed=geo_base)


def cmd_epr_demo(args, rec: Recorder):
    rng = np.random.default_rng(trial_seed(args.seed, 0))
    s = epr.singlet_state()
    t0 = time.perf_counter()
    devs = []
    for k in range(args.trials):
        arm = 1 + k % 2
        if k % 5 == 4:
            instr = epr.polarizer_instrument("circular", arm=arm)
        else:
            instr = epr.polarizer_instrument("linear", float(rng.uniform(0, np.pi)), arm)
        devs.append(abs(epr.pass_probability(instr, s) - 0.5))
    rec.add("singlet_pass_probability_half", max(devs) <= PROB_TOL, max(devs), t0,
            tolerance=PROB_TOL, settings=args.trials)

    t0 = time.perf_counter()
    agg_dev, first_comps, distinct = 0.0, None, 0
    for k in range(args.trials):
        U = hilbert.random_unitary(2, rng)
        agg, mix = epr.remote_mixture(U)
        agg_dev = max(agg_dev, float(np.abs(agg.matrix - np.eye(2) / 2).max()))
        comps = np.array([c.matrix for _, c in mix.components])
        if first_comps is None:
            first_comps = comps
        elif np.abs(comps - first_comps).max() > 1e-6:
            distinct += 1
    rec.add("remote_mixture_half_identity", agg_dev <= PROB_TOL, agg_dev, t0,
            tolerance=PROB_TOL, bases=args.trials,
            bases_with_distinct_components=distinct)
    rec.add("remote_mixture_components_vary", distinct == args.trials - 1,
            started=t0, bases=args.trials)

    t0 = time.perf_counter()
    worst = 0.0
    for k in range(args.trials):
        U = hilbert.random_unitary(2, rng)
        A = epr.QUBITS.lift1(Instrument.from_basis(U))
        B = epr.QUBITS.lift2(Instrument.from_basis(U))
        joint = instruments.sequential(A, B, s).probabilities
        worst = max(worst, float(abs(joint[0, 0]) + abs(joint[1, 1])))
    rec.add("singlet_anticorrelation", worst <= PROB_TOL, worst, t0,
            tolerance=PROB_TOL)

    t0 = time.perf_counter()
    worst = 0.0
    for k in range(args.trials):
        A, B = instruments.random_instrument(4, rng), instruments.random_instrument(4, rng)
        rho = hilbert.random_state(4, False, rng)
        lhs = epr.composed_mixture(rho, A, B)
        rhs = instruments.sequential(A, B, rho).aggregate()
        worst = max(worst, float(np.linalg.norm(lhs - rhs)))
    rec.add("composed_measurement_mixture", worst <= DEFAULT.num, worst, t0,
            tolerance=DEFAULT.num)


def random_psi_prime_case(rng, d1, d2):
    """Commuting I, J on factor 1, canonical J' on factor 2, random Psi."""
    sp = epr.TensorSplit(d1, d2)
    W = hilbert.random_unitary(d1, rng)
    m = int(rng.integers(2, min(d1, d2) + 1))
    n = int(rng.integers(1, d1 + 1))
    I = sp.lift1(Instrument.from_basis(W, instruments.random_partition(rng, d1, n), "I"))
    J = sp.lift1(Instrument.from_basis(W, instruments.random_partition(rng, d1, m), "J"))
    Jp = epr.canonical_remote_instrument(d2, m, sp)
    psi = hilbert.random_vector(d1 * d2, rng)
    return sp, I, J, Jp, psi


def _psi_prime_trial(k, s):
    rng = np.random.default_rng(s)
    d1, d2 = [(2, 2), (2, 3), (4, 2), (4, 3)][k % 4]
    sp, I, J, Jp, psi = random_psi_prime_case(rng, d1, d2)
    res = epr.construct_psi_prime(sp, I, J, Jp, psi, seed=s)
    eq = epr.ep_equalities(I, J, hilbert.DensityState.from_vector(psi), Jp,
                           hilbert.DensityState.from_vector(res.psi_prime))
    return (res.checks["norm_deviation"], s), (res.checks["marginal_match_max"], s), \
        (max(eq.values()), s), res


def cmd_construct_psi_prime(args, rec: Recorder):
    t0 = time.perf_counter()
    base = trial_seed(args.seed, 0)
    res = _run_trials(_psi_prime_trial, base, args.trials, args.jobs)
    rec.aggregate("psi_prime_norm", [r[0] for r in res], t0, PROB_TOL, seed=base)
    rec.aggregate("psi_prime_marginal_match", [r[1] for r in res], t0, CHECK_TOL,
                  seed=base)
    rec.aggregate("psi_prime_ep_equalities", [r[2] for r in res], t0, CHECK_TOL,
                  seed=base)
    if args.result_file and res:
        with open(args.result_file, "w") as fh:
            json.dump(res[0][3].to_dict(), fh, indent=1)


def _verify_ep_trial(k, s):
    rng = np.random.default_rng(s)
    d1, d2 = [(2, 2), (2, 3), (3, 3), (4, 2)][k % 4]
    sp = epr.TensorSplit(d1, d2)
    W = hilbert.random_unitary(d1, rng)
    m = int(rng.integers(2, min(d1, d2) + 1))
    I = sp.lift1(Instrument.from_basis(
        W, instruments.random_partition(rng, d1, int(rng.integers(1, d1 + 1)))))
    J = I if k % 5 == 0 and len(I) <= d2 else sp.lift1(
        Instrument.from_basis(W, instruments.random_partition(rng, d1, m)))
    # hide the split behind a global change of basis
    V = hilbert.random_unitary(sp.dim, rng)
    I, J = I.conjugate(V), J.conjugate(V)
    p = hilbert.random_state(sp.dim, True, rng)
    report, _, _ = epr.verify_ep(I, J, p, CHECK_TOL, seed=s)
    return report.max_deviation if report.passed else max(report.max_deviation, 1.0), s


def cmd_verify_ep(args, rec: Recorder):
    t0 = time.perf_counter()
    base = trial_seed(args.seed, 0)
    res = _run_trials(_verify_ep_trial, base, args.trials, args.jobs)
    rec.aggregate("equivalence_of_conditioning", res, t0, CHECK_TOL, seed=base)
    t0 = time.perf_counter()
    I = Instrument.computational(2, "Z")
    J = Instrument.from_basis(np.array([[1, 1], [1, -1]]) / np.sqrt(2), label="X")
    try:
        epr.verify_ep(I, J, hilbert.DensityState.from_vector([1, 0]))
        refused = False
    except NonCommutingError:
        refused = True
    rec.add("verify_ep_rejects_noncommuting", refused, started=t0)


COMMANDS = {
    "check-lattice": cmd_check_lattice,
    "check-covering": cmd_check_covering,
    "verify-theorem": cmd_verify_theorem,
    "no-signaling": cmd_no_signaling,
    "frame-consistency": cmd_frame_consistency,
    "epr-demo": cmd_epr_demo,
    "construct-psi-prime": cmd_construct_psi_prime,
    "verify-ep": cmd_verify_ep,
}


def _default_seed() -> int:
    env = os.environ.get("COVERLAW_SEED")
    if env is None or env == "":
        return 0
    try:
        return int(env)
    except ValueError:
        raise SystemExit(f"COVERLAW_SEED must be an integer, got {env!r}")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None,
                        help="64-bit seed (default: $COVERLAW_SEED or 0)")
    common.add_argument("--output", "-o", default="-",
                        help="JSON-lines report path (default: stdout)")
    common.add_argument("--jobs", type=int, default=1,
                        help="worker threads for trial loops")
    for name in TOL_FLAGS:
        common.add_argument(f"--tol-{name}", type=float, default=None,
                            help=f"override tolerance '{name}' "
                                 f"(default {getattr(DEFAULT, name):g})")

    parser = argparse.ArgumentParser(prog="coverlaw", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check-lattice", parents=[common],
                       help="validate lattice spec files and check orthomodularity")
    p.add_argument("files", nargs="+", help="lattice JSON files or bundled names")
    p.set_defaults(trials=0)

    p = sub.add_parser("check-covering", parents=[common],
                       help="covering law on lattice files and in projection lattices")
    p.add_argument("files", nargs="*")
    p.add_argument("--dims", type=int, nargs="*", default=[2, 3, 4, 5, 6])
    p.add_argument("--trials", type=int, default=1000)

    p = sub.add_parser("verify-theorem", parents=[common],
                       help="joint-experiment equalities and order symmetry on random commuting pairs")
    p.add_argument("--dim", dest="dims", type=int, nargs="+", default=[4, 6, 8, 9])
    p.add_argument("--trials", type=int, default=250, help="trials per dimension")
    p.add_argument("--kind", choices=["tensor", "block", "both"], default="both")

    p = sub.add_parser("no-signaling", parents=[common],
                       help="local marginals independent of the remote instrument")
    p.add_argument("--dim", dest="dims", type=int, nargs="+", default=[4, 9])
    p.add_argument("--trials", type=int, default=100)

    p = sub.add_parser("frame-consistency", parents=[common],
                       help="joint statistics agree across frames")
    p.add_argument("--scenario", nargs="*", default=[],
                   help="scenario JSON files or bundled names")
    p.add_argument("--trials", type=int, default=50)
    p.add_argument("--geometry-trials", type=int, default=100)

    p = sub.add_parser("epr-demo", parents=[common],
                       help="singlet statistics and remote mixtures")
    p.add_argument("--trials", type=int, default=100)

    p = sub.add_parser("construct-psi-prime", parents=[common],
                       help="random instances of the correlated-state construction")
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--result-file", default=None,
                   help="write the first construction as JSON here")

    p = sub.add_parser("verify-ep", parents=[common],
                       help="equivalence of conditioning on random commuting pairs")
    p.add_argument("--trials", type=int, default=100)
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.seed is None:
        args.seed = _default_seed()
    overrides = {name: getattr(args, f"tol_{name}") for name in TOL_FLAGS
                 if getattr(args, f"tol_{name}") is not None}
    rec = Recorder(args)
    try:
        with using(Tolerances(), **overrides) as tol:
            COMMANDS[args.command](args, rec)
    except (FormatError, KeyError) as exc:
        print(f"coverlaw {args.command}: malformed input: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"coverlaw {args.command}: {exc}", file=sys.stderr)
        return 2

    ok = all(r["pass"] for r in rec.records)
    summary = {"summary": True, "command": args.command, "pass": ok,
               "checks": len(rec.records),
               "failed": sum(not r["pass"] for r in rec.records),
               "seed": args.seed, "trials": getattr(args, "trials", 0),
               "tolerances": tol.as_dict()}
    lines = [json.dumps(r, sort_keys=True) for r in rec.records + [summary]]
    text = "\n".join(lines) + "\n"
    if args.output == "-":
        sys.stdout.write(text)
    else:
        with open(args.output, "w") as fh:
            fh.write(text)
    for r in rec.records:
        where = f" [{r['file']}]" if "file" in r else ""
        dim = f" d={r['dim']}" if "dim" in r else ""
        print(f"{'PASS' if r['pass'] else 'FAIL'}  {r['property']}{where}{dim}  "
              f"max_dev={r['max_deviation']:.3g}", file=sys.stderr)
    print(f"{args.command}: {len(rec.records) - summary['failed']}/{len(rec.records)} "
          f"checks passed (seed {args.seed})", file=sys.stderr)
    return 0 if ok else 1


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
