#!/usr/bin/env python3
"""
Run the acceptance sweeps at full size and write one JSON report per sweep.
"""
import argparse
import logging
import os
import sys
from collections import Counter

import numpy as np
from dotenv import load_dotenv

# Add the project root to the Python path
script_dir = os.path.dirname(os.path.abspath(__file__))
project_root = os.path.dirname(script_dir)
sys.path.append(project_root)

from src.core.errors import InvalidInputError
from src.core.functors import (
    PresentedModule,
    contract,
    contract_morphism,
    extend,
    extended_resolution_agrees,
    lgrid,
    restrict,
)
from src.core.poset import AlignedSubgrid, GridPoset
from src.core.rep import hom_dim, hom_dim_spreads, random_module, spread_module
from src.core.rha import (
    ShortExactSeq,
    barcode_1d,
    dim_vector,
    family_gl_dim_scan,
    is_relative_projective,
    minimal_resolution,
    rank_invariant,
    signed_rank_decomposition,
    spread_rank_invariant,
)
from src.core.spreadcalc import (
    FAMILY_KINDS,
    build_family,
    check_relative_exact_contra,
    end_quiver,
    enumerate_family,
    koszul_complex,
    koszul_witness_length,
)
from src.models.reports import ScanReport
from src.utils.serialization import render_json

# Set up logging
logging.basicConfig(level=logging.INFO, format='%(asctime)s - %(name)s - %(levelname)s - %(message)s')
logger = logging.getLogger(__name__)

BUILT_IN_KINDS = [kind for kind in FAMILY_KINDS if kind != "custom"]

# Accepted global dimension lower bounds per scan
EXPECTED_BOUNDS = {
    "scan_segments_2x2": {2},
    "scan_segments_3x3": {2},
    "scan_upsets_3x3": {1},
    "scan_upsets_4x4": {2},
}


def _hom_failures(P, pairs):
    failures = []
    for S, T in pairs:
        expected = hom_dim(spread_module(P, S), spread_module(P, T))
        got, _ = hom_dim_spreads(P, S, T)
        if got != expected:
            failures.append(f"{S.describe()} -> {T.describe()}: formula {got}, solver {expected}")
    return failures


def check_hom_formula(grid3, grid4, n_pairs, seed):
    """Compare dim Hom from the component formula with the naturality solver."""
    spreads = enumerate_family(grid3, "spreads")
    failures = _hom_failures(grid3, [(S, T) for S in spreads for T in spreads])
    logger.info(f"Hom formula on 3x3: {len(spreads) ** 2} pairs, {len(failures)} failures")

    spreads4 = enumerate_family(grid4, "spreads")
    rng = np.random.default_rng(seed)
    idx = rng.integers(0, len(spreads4), size=(n_pairs, 2))
    failures4 = _hom_failures(grid4, [(spreads4[int(i)], spreads4[int(j)]) for i, j in idx])
    logger.info(f"Hom formula on 4x4: {n_pairs} random pairs, {len(failures4)} failures")
    return {"pairs": len(spreads) ** 2 + n_pairs, "failures": failures + failures4}


def check_quivers(P, kinds):
    out = {}
    for kind in kinds:
        report = end_quiver(P, build_family(P, kind))
        out[kind] = {"arrows": len(report.arrows), "mismatches": report.mismatches}
        logger.info(f"Quiver {kind} on {P.sizes}: {len(report.arrows)} arrows, {len(report.mismatches)} mismatches")
    return out


def check_koszul():
    complex_ = koszul_complex(3)
    out = {"is_exact": complex_.is_exact(), "failures": []}
    if not out["is_exact"]:
        out["failures"].append("not exact")
    for kind in ("single_source_spreads", "spreads"):
        family = build_family(complex_.poset, kind)
        if not check_relative_exact_contra(complex_, family):
            out["failures"].append(f"{kind}: not relative exact")
        length = koszul_witness_length(complex_, family)
        out[f"witness_length_{kind}"] = length
        if length != 3:
            out["failures"].append(f"{kind}: witness length {length}")
    logger.info(f"Koszul n=3: {len(out['failures'])} failures")
    return out


def scan(P, kind, n_random, seed):
    family = build_family(P, kind, with_projectives=True)
    result = family_gl_dim_scan(P, family, n_random=n_random, seed=seed)
    return ScanReport(
        family=kind,
        lower_bound=result.lower_bound,
        witness=repr(result.witness) if result.witness is not None else None,
        candidates=len(result.lengths),
        histogram=dict(sorted(Counter(result.lengths).items())),
    )


def check_rank_additivity(P, count, seed):
    failures = []
    for k in range(count):
        M = random_module(P, 3, 3, seed=seed + k)
        plus, minus = signed_rank_decomposition(M)
        signed = spread_rank_invariant(P, [(S, 1) for S in plus] + [(S, -1) for S in minus])
        if signed != rank_invariant(M):
            failures.append(M.name)
    logger.info(f"Rank additivity: {count} modules, {len(failures)} failures")
    return {"modules": count, "failures": failures}


def check_relative_projectives(grids):
    failures = []
    for P in grids:
        modules = [spread_module(P, S) for S in enumerate_family(P, "spreads")]
        for kind in BUILT_IN_KINDS:
            family = build_family(P, kind, with_projectives=True)
            for M in modules:
                if is_relative_projective(M, family) != (family.index_of(M.spread) is not None):
                    failures.append(f"{kind} on {P.sizes}: {M.name}")
    logger.info(f"Relative projectivity: {len(failures)} failures")
    return {"failures": failures}


def check_functors(count, seed):
    grid = GridPoset.from_sizes([4, 4])
    Q = AlignedSubgrid([[0, 2, 3], [1, 3]])
    PQ = Q.as_poset()
    failures = []
    for k in range(count):
        N = random_module(PQ, 2, 2, seed=seed + k)
        E = extend(N, Q, grid)
        if not restrict(E, Q).equals(N):
            failures.append(f"restrict after extend: {N.name}")
        C = contract(E, Q)
        if dim_vector(C) != dim_vector(N) or rank_invariant(C) != rank_invariant(N):
            failures.append(f"contract after extend: {N.name}")
    logger.info(f"Functor round trips: {count} modules, {len(failures)} failures")
    return {"modules": count, "failures": failures}


def check_contraction_exactness(count, seed):
    """Contract the first sequence of the projective resolution of random 4x4 modules."""
    grid = GridPoset.from_sizes([4, 4])
    Q = AlignedSubgrid([[0, 2, 3], [0, 1, 3]])
    projectives = build_family(grid, "projectives")
    failures = []
    for k in range(count):
        seq = minimal_resolution(random_module(grid, 2, 2, seed=seed + k), projectives).sequences()[0]
        try:
            ShortExactSeq(contract_morphism(seq.f, Q), contract_morphism(seq.g, Q)).validate()
        except InvalidInputError as e:
            failures.append(f"seed {seed + k}: {e}")
    logger.info(f"Contraction exactness: {count} sequences, {len(failures)} failures")
    return {"sequences": count, "failures": failures}


def check_extended_resolutions(count, seed):
    """Extend the hook resolution of the contraction onto the grid of each random presentation."""
    grid = GridPoset.from_sizes([4, 4])
    failures, checked = [], 0
    for k in range(count):
        pres = PresentedModule.random(grid, 2, 2, seed=seed + k)
        Q = lgrid(pres)
        if Q is None:
            continue
        checked += 1
        if not extended_resolution_agrees(pres.realize(grid), Q, "hooks"):
            failures.append(f"seed {seed + k} on {Q!r}")
    logger.info(f"Extended resolutions: {checked} modules, {len(failures)} failures")
    return {"modules": checked, "failures": failures}


def check_barcodes(count, seed):
    failures = []
    for k in range(count):
        P = GridPoset.chain(2 + k % 7)
        M = random_module(P, 3, 2, seed=seed + k)
        signed = spread_rank_invariant(P, barcode_1d(M))
        if signed != rank_invariant(M):
            failures.append(M.name)
    logger.info(f"Barcodes: {count} modules, {len(failures)} failures")
    return {"modules": count, "failures": failures}


def main():
    # Load environment variables
    load_dotenv()

    parser = argparse.ArgumentParser(description="Run the spreadhom acceptance sweeps")
    parser.add_argument("--out", default="acceptance", help="Directory for the JSON reports")
    parser.add_argument("--n-random", type=int, default=100)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()
    os.makedirs(args.out, exist_ok=True)

    grid2 = GridPoset.from_sizes([2, 2])
    grid3 = GridPoset.from_sizes([3, 3])
    grid4 = GridPoset.from_sizes([4, 4])
    reports = {
        "hom_formula": check_hom_formula(grid3, grid4, 500, args.seed),
        "quivers_3x3": check_quivers(grid3, BUILT_IN_KINDS),
        "quivers_3x4": check_quivers(GridPoset.from_sizes([3, 4]), ["segments", "hooks"]),
        "koszul": check_koszul(),
        "scan_segments_2x2": scan(grid2, "segments", args.n_random, args.seed).model_dump(mode="json"),
        "scan_segments_3x3": scan(grid3, "segments", args.n_random, args.seed).model_dump(mode="json"),
        "scan_upsets_3x3": scan(grid3, "upsets", args.n_random, args.seed).model_dump(mode="json"),
        "scan_upsets_4x4": scan(grid4, "upsets", args.n_random, args.seed).model_dump(mode="json"),
        "rank_additivity": check_rank_additivity(grid3, 200, args.seed),
        "relative_projectives": check_relative_projectives([grid2, grid3]),
        "functor_round_trips": check_functors(200, args.seed),
        "contraction_exactness": check_contraction_exactness(100, args.seed),
        "extended_resolutions": check_extended_resolutions(50, args.seed),
        "barcodes": check_barcodes(200, args.seed),
    }

    ok = True
    for name, report in reports.items():
        path = os.path.join(args.out, f"{name}.json")
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(render_json(report))
        logger.info(f"Wrote {path}")
        failures = report.get("failures") or []
        if name in EXPECTED_BOUNDS and report["lower_bound"] not in EXPECTED_BOUNDS[name]:
            failures = [f"lower bound {report['lower_bound']}"]
        for entry in report.values():
            if isinstance(entry, dict) and entry.get("mismatches"):
                failures = failures + entry["mismatches"]
        if failures:
            logger.error(f"{name}: {len(failures)} failures, first: {failures[0]}")
            ok = False
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
