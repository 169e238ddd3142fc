"""Registry of anchor strings attached to check records.

Each anchor is the mathematical statement a check certifies, written as a
formula.  Record anchors must come from this table.
"""

from __future__ import annotations

ANCHORS: dict[str, str] = {
    "lie-axioms": "[x,y] = -[y,x]; [x,[y,z]] + [y,[z,x]] + [z,[x,y]] = 0; [L,L] <= p^eps L",
    "bch-congruence": "Phi(-v + p^k w, v) = p^k w mod p^(k+1) L",
    "commutator-congruence": "(exp u, exp v) = exp [u,v] mod G^(p^(k+1)) when [u,L] <= p^k L",
    "exp-power": "exp(m u) = exp(u)^m",
    "exp-congruence": "u = v mod p^k L  =>  exp(u) exp(v)^-1 in G^(p^k)",
    "exp-additive": "exp(u + v) = exp(u) exp(v) mod G^p",
    "group-mul-matrix": "exp(u) exp(v) = exp Phi(u, v)",
    "graded-dimension": "gr K[G/G^(p^m)] = K[y_1..y_d]/(y_i^(p^m))",
    "filtration-basis": "J^n = span{b^alpha : |alpha| >= n}",
    "b-commute": "b_i b_j - b_j b_i in J^3",
    "symbol-multiplicative": "gr(xy) = gr(x) gr(y)",
    "convolution": "g^lambda g^mu computed in exponential coordinates",
    "subalgebra-span": "K[N] = image of K[G_1]; K[N] cap J^n = K[N cap M_(>=n)]",
    "filtration-c": "[a, F_n A] <= F_(n - p^k + 1) A",
    "filtration-d": "[a, F_n A_1] <= F_(n - p^(k+1) + p) A",
    "rho-formula": "D_u(y_j) = sum_i c_ij y_i^(p^k)",
    "derivation-display": "D_(p^r u) = induced derivation of exp(p^r u) at theta = p^(r+k) - 1",
    "control": "I is D-stable  <=>  I = (I cap B_1) B",
    "kernel": "D(x) = 0  <=>  x in B_1",
    "reflexive-closure": "closure(I) = xR with x = gcd(I); xR/I pseudo-null",
    "pseudo-null": "R/I pseudo-null  <=>  I^-1 = R  <=>  gcd(I) is a unit",
    "delta": "delta(w) = max{k : w in F_n A_1 + F_(n-k) A}",
    "cleaning": "delta(w u) > delta(w), u = 1 - c",
    "cleaning-loop": "w u in A_1 for a unit u",
    "a-closure": "{a_r, Y_w}_theta(a_r) in gr I for r >> 0",
    "hypothesis": "Y in a-closure of XB for all listed sources  =>  D(Y) <= XB",
    "elimination": "coprime eliminated coefficients  =>  dY/dv in XB",
    "hypothesis-failure": "(KG, KG^p) at p = 2: listed D(Y) in XB but dY/dh not in XB",
}


def anchor(key: str) -> str:
    return ANCHORS[key]
