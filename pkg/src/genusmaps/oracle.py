"""Exact census of rooted maps on orientable surfaces for small edge counts.

A map with m edges is encoded by its rotation system: darts 0..2m-1 with the
fixed pairing alpha0(d) = d XOR 1 and a permutation sigma whose cycles are
the counterclockwise dart orders around vertices.  Scanning every sigma in
S_2m (with the pairing held fixed) and keeping the transitive ones visits
each rooted map the same number of times, so exact rooted counts fall out of
a single division by the pairing's centralizer order:

    rooted count = (#transitive sigma in the class) * 2m / (2^m * m!)

Faces are the cycles of sigma composed with the pairing, and the genus comes
from the Euler relation V - m + F = 2 - 2g.  The scan is a numba kernel; the
sigma-space is partitioned by the image of dart 0, which also provides the
unit of work distribution across worker processes.
"""

from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np
from numba import njit

from genusmaps.numeric import DomainError, ResourceLimitError

DEFAULT_EDGE_LIMIT = 5
HARD_EDGE_LIMIT = 6


@njit(cache=True)
def _scan_chunk(m: int, first: int) -> np.ndarray:
    """Scan all sigma with sigma(0) = first; returns sigma counts indexed by
    (V, F, k_max)."""
    n = 2 * m
    counts = np.zeros((n + 2, n + 2, 4), dtype=np.int64)

    # Lehmer-decode scratch space
    sigma = np.empty(n, dtype=np.int64)
    pool = np.empty(n - 1, dtype=np.int64)
    avail = np.empty(n - 1, dtype=np.int64)
    vid = np.empty(n, dtype=np.int64)
    seen = np.empty(n, dtype=np.int64)
    stack = np.empty(n, dtype=np.int64)
    eu = np.empty(m, dtype=np.int64)
    ev = np.empty(m, dtype=np.int64)
    deg = np.empty(n, dtype=np.int64)
    vseen = np.empty(n, dtype=np.int64)
    vstack = np.empty(n, dtype=np.int64)

    j = 0
    for v in range(n):
        if v != first:
            pool[j] = v
            j += 1

    total = 1
    for i in range(2, n):
        total *= i  # (n-1)!

    for idx in range(total):
        # ---- decode permutation idx over the pool into sigma[1..] -------
        for i in range(n - 1):
            avail[i] = pool[i]
        sigma[0] = first
        rem = idx
        size = n - 1
        f = total
        for pos in range(1, n):
            f //= size
            d = rem // f
            rem -= d * f
            sigma[pos] = avail[d]
            size -= 1
            for i in range(d, size):
                avail[i] = avail[i + 1]

        # ---- dart connectivity (moves: sigma and the pairing) -----------
        for i in range(n):
            seen[i] = 0
        seen[0] = 1
        stack[0] = 0
        top = 1
        reached = 1
        while top > 0:
            top -= 1
            d = stack[top]
            for e in (sigma[d], d ^ 1):
                if seen[e] == 0:
                    seen[e] = 1
                    stack[top] = e
                    top += 1
                    reached += 1
        if reached != n:
            continue

        # ---- vertices (sigma cycles) and faces (sigma o pairing cycles) --
        for i in range(n):
            vid[i] = -1
        V = 0
        for d in range(n):
            if vid[d] < 0:
                e = d
                while vid[e] < 0:
                    vid[e] = V
                    e = sigma[e]
                V += 1
        for i in range(n):
            seen[i] = 0
        F = 0
        for d in range(n):
            if seen[d] == 0:
                e = d
                while seen[e] == 0:
                    seen[e] = 1
                    e = sigma[e ^ 1]
                F += 1

        # ---- underlying multigraph and connectivity class ----------------
        has_loop = False
        for i in range(m):
            eu[i] = vid[2 * i]
            ev[i] = vid[2 * i + 1]
            if eu[i] == ev[i]:
                has_loop = True

        k = 1
        if m == 1:
            # the link map and the loop map are degenerate nonseparable maps
            k = 2
        elif not has_loop:
            separable = False
            if V >= 3:
                for x in range(V):
                    # connectivity of the graph with vertex x removed
                    for i in range(V):
                        vseen[i] = 0
                    start = -1
                    for i in range(V):
                        if i != x:
                            start = i
                            break
                    vseen[start] = 1
                    vstack[0] = start
                    vtop = 1
                    vreached = 1
                    while vtop > 0:
                        vtop -= 1
                        u = vstack[vtop]
                        for i in range(m):
                            a, b = eu[i], ev[i]
                            if a == x or b == x:
                                continue
                            w = -1
                            if a == u:
                                w = b
                            elif b == u:
                                w = a
                            if w >= 0 and vseen[w] == 0:
                                vseen[w] = 1
                                vstack[vtop] = w
                                vtop += 1
                                vreached += 1
                    if vreached != V - 1:
                        separable = True
                        break
            if not separable:
                k = 2

        if k == 2 and V >= 4 and not has_loop:
            # 3-connected: simple, min degree >= 3, no 2-vertex cut
            simple = True
            for i in range(m):
                a1 = eu[i] if eu[i] < ev[i] else ev[i]
                b1 = eu[i] if eu[i] > ev[i] else ev[i]
                for i2 in range(i + 1, m):
                    a2 = eu[i2] if eu[i2] < ev[i2] else ev[i2]
                    b2 = eu[i2] if eu[i2] > ev[i2] else ev[i2]
                    if a1 == a2 and b1 == b2:
                        simple = False
            if simple:
                for i in range(V):
                    deg[i] = 0
                for i in range(m):
                    deg[eu[i]] += 1
                    deg[ev[i]] += 1
                ok = True
                for i in range(V):
                    if deg[i] < 3:
                        ok = False
                if ok:
                    for x in range(V):
                        for y in range(x + 1, V):
                            for i in range(V):
                                vseen[i] = 0
                            start = -1
                            for i in range(V):
                                if i != x and i != y:
                                    start = i
                                    break
                            vseen[start] = 1
                            vstack[0] = start
                            vtop = 1
                            vreached = 1
                            while vtop > 0:
                                vtop -= 1
                                u = vstack[vtop]
                                for i in range(m):
                                    a, b = eu[i], ev[i]
                                    if a == x or b == x or a == y or b == y:
                                        continue
                                    w = -1
                                    if a == u:
                                        w = b
                                    elif b == u:
                                        w = a
                                    if w >= 0 and vseen[w] == 0:
                                        vseen[w] = 1
                                        vstack[vtop] = w
                                        vtop += 1
                                        vreached += 1
                            if vreached != V - 2:
                                ok = False
                if ok:
                    k = 3

        counts[V, F, k] += 1
    return counts


@dataclass(frozen=True)
class MapCensusEntry:
    """Exact rooted-map count at fixed (edges, vertices, faces)."""

    edges: int
    vertices: int
    faces: int
    genus: int
    connectivity: int  # largest class in {1, 2, 3} the map belongs to
    count: int


def _entries_for_m(m: int, workers: int) -> List[MapCensusEntry]:
    n = 2 * m
    chunks = list(range(n))
    if workers <= 1:
        parts = [_scan_chunk(m, first) for first in chunks]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_scan_chunk, [m] * n, chunks))
    counts = np.zeros_like(parts[0])
    for p in parts:  # fixed chunk order; addition is exact on int64
        counts += p
    centralizer = (2 ** m) * math.factorial(m)
    entries = []
    for V in range(1, n + 2):
        for F in range(1, n + 2):
            for k in (1, 2, 3):
                c = int(counts[V, F, k])
                if c == 0:
                    continue
                euler = V - m + F
                assert (2 - euler) % 2 == 0 and euler <= 2, \
                    "Euler relation violated"
                g = (2 - euler) // 2
                rooted, rem = divmod(c * n, centralizer)
                assert rem == 0, "rooted count must be integral"
                entries.append(MapCensusEntry(
                    edges=m, vertices=V, faces=F, genus=g,
                    connectivity=k, count=rooted))
    return entries


def census(m_max: int, workers: int = 1,
           allow_large: bool = False) -> List[MapCensusEntry]:
    """Exact rooted-map census for every edge count m <= m_max.

    m_max defaults to at most 5 (10 darts, 3 628 800 rotation systems);
    m = 6 scans 4.8e8 rotation systems and must be enabled explicitly.
    """
    if m_max < 1:
        raise DomainError("m_max must be >= 1")
    limit = HARD_EDGE_LIMIT if allow_large else DEFAULT_EDGE_LIMIT
    if m_max > limit:
        raise ResourceLimitError(
            f"census with m_max={m_max} exceeds the guard ({limit}); "
            "pass allow_large=True for m=6, larger sizes are unsupported")
    out: List[MapCensusEntry] = []
    for m in range(1, m_max + 1):
        out.extend(_entries_for_m(m, workers))
    return out


def tutte_planar_total(m: int) -> int:
    """Rooted planar maps with m edges: 2 * 3^m (2m)! / (m! (m+2)!).

    Classical closed form, used as an independent oracle for the census.
    """
    q, rem = divmod(2 * 3**m * math.factorial(2 * m),
                    math.factorial(m) * math.factorial(m + 2))
    assert rem == 0
    return q


def totals_by(entries: List[MapCensusEntry], genus: Optional[int] = None,
              min_connectivity: int = 1) -> Dict[int, int]:
    """Total rooted counts per edge count, filtered by genus/connectivity."""
    out: Dict[int, int] = {}
    for e in entries:
        if genus is not None and e.genus != genus:
            continue
        if e.connectivity < min_connectivity:
            continue
        out[e.edges] = out.get(e.edges, 0) + e.count
    return out


def counts_by_vf(entries: List[MapCensusEntry], genus: int,
                 min_connectivity: int) -> Dict[Tuple[int, int], int]:
    """Rooted counts keyed by (vertices, faces) at fixed genus."""
    out: Dict[Tuple[int, int], int] = {}
    for e in entries:
        if e.genus != genus or e.connectivity < min_connectivity:
            continue
        key = (e.vertices, e.faces)
        out[key] = out.get(key, 0) + e.count
    return out


CSV_COLUMNS = ["edges", "vertices", "faces", "genus", "connectivity", "count"]


def to_csv(entries: List[MapCensusEntry]) -> str:
    """Render a census as CSV with a fixed column order and row order."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for e in sorted(entries, key=lambda e: (e.edges, e.vertices, e.faces,
                                            e.connectivity)):
        writer.writerow([e.edges, e.vertices, e.faces, e.genus,
                         e.connectivity, e.count])
    return buf.getvalue()


def trend_report(entries: List[MapCensusEntry], g: int, k: int,
                 prec: int = 64) -> List[dict]:
    """Exact census counts next to the asymptotic estimate, row per (n, m).

    Informational only — the asymptotics need n, m far beyond census sizes,
    so no pass/fail is attached.
    """
    from genusmaps.mapcounts import CountQuery, map_estimate

    rows = []
    for e in sorted(entries, key=lambda e: (e.edges, e.vertices)):
        if e.genus != g or e.connectivity < k:
            continue
        row = {"edges": e.edges, "vertices": e.vertices, "faces": e.faces,
               "genus": e.genus, "exact": e.count, "estimate": None}
        try:
            _, est = map_estimate(
                CountQuery(g=g, k=k, n=e.vertices, m=e.edges), prec)
            row["estimate"] = est.scientific(6)
        except DomainError:
            pass  # density outside the class interval at tiny sizes
        rows.append(row)
    return rows
