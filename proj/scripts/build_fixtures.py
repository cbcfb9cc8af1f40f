#!/usr/bin/env python3
"""Rebuild the pinned SuiteSparse fixture cache under data/suitesparse/.

The benchmark host has no route to the SuiteSparse collection server, so the
subset used by the acceptance suite is assembled from the copies of collection
matrices that ship inside the SuiteSparse source tree (vendored, e.g., by the
``suitesparse_sys`` 0.1.4 crate). Pass the path of that ``vendor`` directory.

Every matrix is checked against the collection index (ss_index.mat) for
dimension, nonzero count and numerical symmetry before it is written.
"""
import argparse
import csv
import os

import numpy as np
import scipy.io as sio
import scipy.sparse as sp

KIND_CHEM = "chemical process simulation problem"


def read_triplet(path):
    lines = open(path).read().split("\n")
    head = lines[0].split()
    n, m = int(head[0]), int(head[1])
    base = int(head[3]) if len(head) > 3 else 0
    rows, cols, vals = [], [], []
    for line in lines[1:]:
        t = line.split()
        if len(t) < 3:
            continue
        rows.append(int(t[0]) - base)
        cols.append(int(t[1]) - base)
        vals.append(float(t[2]))
    return sp.coo_matrix((vals, (rows, cols)), shape=(n, m)).tocsr()


def numerical_symmetry(a):
    a = sp.coo_matrix(a)
    d = {(i, j): v for i, j, v in zip(a.row, a.col, a.data) if v != 0}
    off = [(k, v) for k, v in d.items() if k[0] != k[1]]
    if not off:
        return 1.0
    return sum(1 for (i, j), v in off if d.get((j, i)) == v) / len(off)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("vendor", help="SuiteSparse source tree root")
    ap.add_argument("--out", default=os.path.join(os.path.dirname(__file__), "..", "data", "suitesparse"))
    args = ap.parse_args()
    v = args.vendor

    index = sio.loadmat(os.path.join(v, "CXSparse/MATLAB/ssget/files/ss_index.mat"),
                        squeeze_me=True, struct_as_record=False)["ss_index"]
    meta = {f"{g}/{n}": (int(r), int(nz), float(ns))
            for g, n, r, nz, ns in zip(index.Group, index.Name, index.nrows, index.nnz,
                                       index.numerical_symmetry)}

    mats = {
        "HB/west0067": (sio.loadmat(os.path.join(v, "UMFPACK/MATLAB/west.mat"), squeeze_me=True,
                                    struct_as_record=False)["Problem"].A, KIND_CHEM),
        # w156 carries HB/west0156 as its real part
        "HB/west0156": (sp.csr_matrix(sio.mmread(os.path.join(v, "KLU/Matrix/w156.mtx")).real), KIND_CHEM),
        "HB/west0479": (sio.hb_read(os.path.join(v, "RBio/RBio/private/west0479.rua")), KIND_CHEM),
        "HB/impcol_a": (sio.mmread(os.path.join(v, "KLU/Matrix/impcol_a.mtx")), KIND_CHEM),
        "HB/arc130": (read_triplet(os.path.join(v, "UMFPACK/Tcov/TestMat/arc130")), "unlabeled"),
        "Grund/d_dyn": (read_triplet(os.path.join(v, "UMFPACK/Tcov/TestMat/d_dyn")), "unlabeled"),
    }

    rows = []
    for key, (a, kind) in mats.items():
        a = sp.csr_matrix(a)
        a.eliminate_zeros()
        a = sp.coo_matrix(a)
        n, nnz, nsym = meta[key]
        assert a.shape == (n, n), key
        assert a.nnz == nnz, (key, a.nnz, nnz)
        assert abs(numerical_symmetry(a) - nsym) < 1e-12, key
        group, name = key.split("/")
        os.makedirs(os.path.join(args.out, group), exist_ok=True)
        order = np.lexsort((a.row, a.col))
        with open(os.path.join(args.out, group, name + ".mtx"), "w") as f:
            f.write("%%MatrixMarket matrix coordinate real general\n")
            f.write("%-------------------------------------------------------------------------------\n")
            f.write(f"% name: {key}\n")
            f.write(f"% kind: {kind}\n")
            f.write("%-------------------------------------------------------------------------------\n")
            f.write(f"{n} {n} {a.nnz}\n")
            for k in order:
                f.write(f"{a.row[k] + 1} {a.col[k] + 1} {float(a.data[k])!r}\n")
        rows.append((group, name, n, nnz, f"{nsym:.17g}", kind))

    with open(os.path.join(args.out, "index.csv"), "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(["group", "name", "n", "nnz", "numerical_symmetry", "kind"])
        w.writerows(rows)
    with open(os.path.join(args.out, "manifest.txt"), "w") as f:
        f.write("# pinned subset: numerical symmetry < 25%, n <= 5000\n")
        for r in rows:
            f.write(f"{r[0]}/{r[1]}\n")


if __name__ == "__main__":
    main()
