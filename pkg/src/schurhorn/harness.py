"""Planted-instance generation under the Erdos-Renyi noise model, instance
file I/O, and the phase-transition sweep."""

from __future__ import annotations

import csv
import hashlib
import itertools
import time
from dataclasses import dataclass

import numpy as np

from .graphs import FAMILIES, Graph, GraphError, GraphParseError, parse_graph_lines
from .solver import SolveParams, check_recovery, solve
from .spectral import eig_sym, eigengap

CSV_COLUMNS = ["family", "k", "n", "p", "trial", "seed", "gamma", "success",
               "objective", "iterations", "primal_res", "dual_res", "status",
               "wall_ms"]


class HarnessError(ValueError):
    pass


@dataclass(frozen=True)
class PlantedInstance:
    """Observed graph with a hidden planted copy.

    hidden_set is the sorted list of observed vertices carrying the copy;
    hidden_perm[t] is the planted-graph label of hidden_set[t].
    """

    observed: Graph
    planted: Graph
    hidden_set: tuple[int, ...]
    hidden_perm: tuple[int, ...]
    p: float
    seed: int

    def __post_init__(self):
        k = self.planted.n
        if len(self.hidden_set) != k or len(self.hidden_perm) != k:
            raise HarnessError("hidden set/perm size must equal planted size")
        if sorted(self.hidden_perm) != list(range(k)):
            raise HarnessError("hidden_perm is not a permutation")
        if list(self.hidden_set) != sorted(set(self.hidden_set)):
            raise HarnessError("hidden_set must be sorted and duplicate-free")


def derive_seed(base_seed: int, *parts) -> int:
    """Stable 64-bit seed from a base seed and arbitrary cell coordinates."""
    text = repr((int(base_seed),) + tuple(parts)).encode()
    return int.from_bytes(hashlib.sha256(text).digest()[:8], "big")


def plant(planted: Graph, n: int, p: float, seed: int) -> PlantedInstance:
    """Embed the planted graph at a random vertex subset and sprinkle noise
    edges with probability p on every pair touching the complement."""
    k = planted.n
    if n < k:
        raise HarnessError(f"n={n} smaller than planted size k={k}")
    if not 0 <= p <= 1:
        raise HarnessError(f"p must lie in [0,1], got {p}")
    rng = np.random.default_rng(seed)
    hidden = np.sort(rng.choice(n, size=k, replace=False))
    perm = rng.permutation(k)
    pos = {v: t for t, v in enumerate(hidden)}
    edges = set()
    for a, b in planted.edges:
        s = int(np.nonzero(perm == a)[0][0])
        t = int(np.nonzero(perm == b)[0][0])
        edges.add((min(hidden[s], hidden[t]), max(hidden[s], hidden[t])))
    in_v = np.zeros(n, dtype=bool)
    in_v[hidden] = True
    for i in range(n):
        for j in range(i + 1, n):
            if in_v[i] and in_v[j]:
                continue
            if rng.random() < p:
                edges.add((i, j))
    observed = Graph(n, frozenset(edges))
    return PlantedInstance(observed, planted, tuple(int(v) for v in hidden),
                           tuple(int(x) for x in perm), p, seed)


def gamma_policy(planted: Graph) -> float:
    """Eigenvalue of the planted adjacency with the largest multiplicity.

    Ties break toward the larger eigengap, then the larger eigenvalue.
    """
    dec = eig_sym(planted.adjacency())
    best = None
    for i in range(dec.t):
        key = (dec.multiplicities[i], eigengap(dec, i), dec.distinct_values[i])
        if best is None or key > best[0]:
            best = (key, dec.distinct_values[i])
    return float(best[1])


def save_instance(instance: PlantedInstance, path) -> None:
    """Edge-list of the observed graph plus a '#'-prefixed trailer holding
    the planted graph and the ground truth."""
    with open(path, "w") as fh:
        g = instance.observed
        fh.write(f"{g.n} {g.m}\n")
        for i, j in sorted(g.edges):
            fh.write(f"{i} {j}\n")
        pg = instance.planted
        fh.write(f"#planted {pg.n} {pg.m}\n")
        for i, j in sorted(pg.edges):
            fh.write(f"#e {i} {j}\n")
        fh.write("#V " + " ".join(str(v) for v in instance.hidden_set) + "\n")
        fh.write("#perm " + " ".join(str(x) for x in instance.hidden_perm) + "\n")
        fh.write(f"#p {instance.p!r}\n")
        fh.write(f"#seed {instance.seed}\n")


def load_instance(path) -> PlantedInstance:
    with open(path) as fh:
        lines = fh.readlines()
    observed = parse_graph_lines(lines)
    planted_header = None
    planted_edges = []
    hidden = perm = None
    p = seed = None
    for line_no, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line.startswith("#"):
            continue
        parts = line[1:].split()
        if not parts:
            continue
        tag = parts[0]
        try:
            if tag == "planted":
                planted_header = (int(parts[1]), int(parts[2]))
            elif tag == "e":
                planted_edges.append((int(parts[1]), int(parts[2])))
            elif tag == "V":
                hidden = tuple(int(x) for x in parts[1:])
            elif tag == "perm":
                perm = tuple(int(x) for x in parts[1:])
            elif tag == "p":
                p = float(parts[1])
            elif tag == "seed":
                seed = int(parts[1])
        except (IndexError, ValueError):
            raise GraphParseError(f"malformed trailer line {raw!r}", line_no)
    if planted_header is None or hidden is None or perm is None \
            or p is None or seed is None:
        raise HarnessError(f"{path}: missing instance trailer fields")
    planted = Graph(planted_header[0], frozenset(planted_edges))
    if planted.m != planted_header[1]:
        raise HarnessError(f"{path}: planted edge count mismatch")
    return PlantedInstance(observed, planted, hidden, perm, p, seed)


@dataclass(frozen=True)
class SweepConfig:
    family: str
    family_params: tuple = ()
    n_grid: tuple[int, ...] = ()
    p_grid: tuple[float, ...] = ()
    trials: int = 10
    tol_rec: float = 1e-3
    base_seed: int = 0
    gamma: float | None = None  # None -> gamma_policy
    rho: float = 1.0
    max_iter: int = 20_000
    eps_abs: float = 1e-7
    eps_rel: float = 1e-6

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise HarnessError(f"unknown family {self.family!r}")
        if not self.n_grid or not self.p_grid:
            raise HarnessError("n and p grids must be nonempty")
        if self.trials < 1:
            raise HarnessError("trials must be >= 1")


def sweep_config_from_dict(d: dict) -> SweepConfig:
    return SweepConfig(
        family=d["family"],
        family_params=tuple(d.get("family_params", ())),
        n_grid=tuple(int(n) for n in d["n_grid"]),
        p_grid=tuple(float(p) for p in d["p_grid"]),
        trials=int(d.get("trials", 10)),
        tol_rec=float(d.get("tol_rec", 1e-3)),
        base_seed=int(d.get("base_seed", 0)),
        gamma=float(d["gamma"]) if "gamma" in d else None,
        rho=float(d.get("rho", 1.0)),
        max_iter=int(d.get("max_iter", 20_000)),
        eps_abs=float(d.get("eps_abs", 1e-7)),
        eps_rel=float(d.get("eps_rel", 1e-6)),
    )


def run_sweep(config: SweepConfig, out_path) -> list[dict]:
    """Run the (n, p, trial) grid and write one CSV row per trial.

    Rows are written in deterministic (n, p, trial) order; per-trial solver
    failures are recorded in the row rather than aborting the sweep.
    All columns except wall_ms are deterministic given the config.
    """
    planted = FAMILIES[config.family](*config.family_params)
    gamma = config.gamma if config.gamma is not None else gamma_policy(planted)
    rows = []
    for n, p, trial in itertools.product(config.n_grid, config.p_grid,
                                         range(config.trials)):
        seed = derive_seed(config.base_seed, n, repr(p), trial)
        row = {"family": config.family, "k": planted.n, "n": n, "p": p,
               "trial": trial, "seed": seed, "gamma": gamma}
        t0 = time.perf_counter()
        try:
            instance = plant(planted, n, p, seed)
            params = SolveParams(rho=config.rho, max_iter=config.max_iter,
                                 eps_abs=config.eps_abs,
                                 eps_rel=config.eps_rel, gamma=gamma)
            report = solve(instance, params)
            row.update(success=int(check_recovery(report, instance,
                                                  config.tol_rec)),
                       objective=f"{report.objective:.12g}",
                       iterations=report.iterations,
                       primal_res=f"{report.primal_res:.6g}",
                       dual_res=f"{report.dual_res:.6g}",
                       status=report.status)
        except Exception as exc:  # failure is data, not an abort
            row.update(success=0, objective="nan", iterations=0,
                       primal_res="nan", dual_res="nan",
                       status=f"error:{type(exc).__name__}")
        row["wall_ms"] = int(round((time.perf_counter() - t0) * 1000))
        rows.append(row)
    with open(out_path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=CSV_COLUMNS)
        writer.writeheader()
        writer.writerows(rows)
    return rows
