"""Published arrays and array pairs used as fixed oracles."""

# OA(9, 3, 3, 2): accepting entries of the 3-ary zero-sum predicate over Z_3
OA_9_3_3_2 = [
    (0, 0, 0), (0, 1, 2), (0, 2, 1), (1, 0, 2), (1, 1, 1),
    (1, 2, 0), (2, 0, 1), (2, 1, 0), (2, 2, 2),
]
# D_2(3, 2, 3)
DS_3_2_3 = [(0, 0), (0, 1), (0, 2)]

# OA(4, 3, 2, 2) realizing rho(3,2,2) = 1/4 and the DS obtained by a zero column
OA_RHO_322 = [(0, 0, 0), (0, 1, 1), (1, 0, 1), (1, 1, 0)]
DS_RHO_E_422 = [(0, 0, 0, 0), (0, 1, 1, 0), (1, 0, 1, 0), (1, 1, 0, 0)]

# OA(12, 4, 2, 2) realizing rho(4,2,2) = 1/6
OA_RHO_422 = [
    (0, 0, 0, 0), (0, 0, 0, 0), (0, 0, 1, 1), (0, 1, 0, 1), (0, 1, 1, 0), (0, 1, 1, 1),
    (1, 0, 0, 1), (1, 0, 1, 0), (1, 0, 1, 1), (1, 1, 0, 0), (1, 1, 0, 1), (1, 1, 1, 0),
]

# q = 3: DS realizing rho_E(3,3,2) = 1/3, its shift closure, DS realizing rho_E(4,3,2) = 1/5,
# and an OA realizing rho(4,3,2) = 1/9
DS_RHO_E_332 = [(0, 0, 0), (0, 1, 2), (0, 2, 1)]
OA_SHIFTS_OF_DS_332 = [
    (0, 0, 0), (0, 1, 2), (0, 2, 1), (1, 1, 1), (1, 2, 0),
    (1, 0, 2), (2, 2, 2), (2, 0, 1), (2, 1, 0),
]
DS_RHO_E_432 = [
    (0, 0, 0, 0), (0, 0, 0, 0), (0, 0, 0, 0), (0, 0, 1, 2), (0, 0, 2, 1),
    (0, 1, 0, 2), (0, 1, 1, 2), (0, 1, 2, 0), (0, 1, 2, 1), (0, 1, 2, 2),
    (0, 2, 0, 1), (0, 2, 1, 0), (0, 2, 1, 1), (0, 2, 1, 2), (0, 2, 2, 1),
]
OA_RHO_432 = [
    (0, 0, 0, 0), (0, 1, 2, 2), (0, 2, 1, 1), (1, 1, 1, 0), (1, 2, 0, 2),
    (1, 0, 2, 1), (2, 2, 2, 0), (2, 0, 1, 2), (2, 1, 0, 1),
]

# ARPAs: (psi rows, phi rows)
ARPA_432 = (
    [(0, 0, 2, 3), (0, 1, 0, 3), (0, 1, 2, 2), (0, 1, 2, 2), (3, 0, 0, 2), (3, 1, 2, 3)],
    [(0, 0, 2, 2), (0, 1, 0, 2), (0, 1, 2, 3), (0, 1, 2, 3), (3, 0, 0, 3), (3, 1, 2, 2)],
)
ARPA_532 = (
    [(0, 1, 3, 3, 3), (0, 2, 2, 2, 4), (1, 1, 2, 1, 4), (1, 2, 3, 1, 3), (3, 3, 2, 3, 4), (3, 3, 3, 2, 3)],
    [(0, 1, 2, 3, 4), (0, 2, 3, 2, 3), (1, 1, 3, 1, 3), (1, 2, 2, 1, 4), (3, 3, 2, 2, 4), (3, 3, 3, 3, 3)],
)
ARPA_543 = (
    [(0, 0, 1, 0, 3), (0, 0, 2, 3, 4), (0, 0, 2, 3, 4), (0, 1, 1, 3, 4), (0, 1, 1, 3, 4),
     (0, 1, 2, 0, 4), (0, 1, 2, 0, 4), (0, 1, 2, 3, 3), (0, 1, 2, 3, 3), (4, 0, 1, 0, 4),
     (4, 0, 1, 3, 3), (4, 0, 2, 0, 3), (4, 1, 1, 0, 3), (4, 1, 2, 3, 4), (4, 1, 2, 3, 4)],
    [(0, 0, 1, 3, 4), (0, 0, 2, 0, 4), (0, 0, 2, 3, 3), (0, 1, 1, 0, 4), (0, 1, 1, 3, 3),
     (0, 1, 2, 0, 3), (0, 1, 2, 3, 4), (0, 1, 2, 3, 4), (0, 1, 2, 3, 4), (4, 0, 1, 0, 3),
     (4, 0, 1, 0, 3), (4, 0, 2, 3, 4), (4, 1, 1, 3, 4), (4, 1, 2, 0, 4), (4, 1, 2, 3, 3)],
)

# relaxed ARPAs
RELAXED_432 = (
    [(0, 0, 1, 2), (0, 0, 1, 2), (0, 1, 0, 3), (0, 1, 2, 0), (0, 1, 2, 0), (0, 1, 2, 1),
     (0, 1, 3, 3), (0, 1, 3, 3), (0, 2, 2, 3), (0, 2, 2, 3), (0, 3, 0, 1), (0, 3, 2, 3)],
    [(0, 0, 0, 0), (0, 0, 3, 1), (0, 1, 2, 3), (0, 1, 2, 3), (0, 1, 2, 3), (0, 1, 2, 3),
     (0, 1, 2, 3), (0, 1, 2, 3), (0, 2, 0, 2), (0, 2, 1, 1), (0, 3, 1, 0), (0, 3, 3, 2)],
)
RELAXED_543 = (
    [(0, 0, 1, 2, 3), (0, 0, 2, 3, 4), (0, 0, 2, 3, 4), (0, 1, 1, 3, 4), (0, 1, 2, 2, 4),
     (0, 1, 2, 3, 0), (0, 1, 2, 3, 3), (0, 1, 2, 4, 4), (0, 1, 3, 3, 4), (0, 2, 2, 3, 4),
     (0, 2, 2, 3, 4), (0, 2, 3, 4, 0)],
    [(0, 0, 1, 3, 4), (0, 0, 2, 2, 4), (0, 0, 2, 3, 3), (0, 1, 1, 2, 3), (0, 1, 2, 3, 4),
     (0, 1, 2, 3, 4), (0, 1, 2, 3, 4), (0, 1, 2, 3, 4), (0, 1, 3, 4, 0), (0, 2, 2, 3, 0),
     (0, 2, 2, 4, 4), (0, 2, 3, 3, 4)],
)
# relaxed (q, 2)-ARPAs of strength 2 with ratio 1/q
RELAXED_Q22 = {
    3: ([(0, 1, 0), (0, 0, 1), (0, 2, 2)],
        [(0, 1, 2), (0, 2, 1), (0, 0, 0)]),
    4: ([(0, 1, 0, 1), (0, 3, 0, 3), (0, 0, 2, 2), (0, 2, 2, 0)],
        [(0, 1, 2, 3), (0, 3, 2, 1), (0, 2, 0, 2), (0, 0, 0, 0)]),
    5: ([(0, 1, 0, 1, 0), (0, 0, 1, 0, 1), (0, 4, 4, 0, 4), (0, 1, 0, 0, 1), (0, 4, 0, 4, 4),
         (0, 0, 2, 2, 0), (0, 0, 0, 2, 2), (0, 3, 3, 3, 0), (0, 0, 3, 3, 3), (0, 2, 2, 0, 0)],
        [(0, 1, 2, 3, 4), (0, 1, 2, 3, 4), (0, 4, 3, 2, 1), (0, 4, 3, 2, 1), (0, 2, 4, 1, 3),
         (0, 3, 1, 4, 2), (0, 0, 0, 0, 0), (0, 0, 0, 0, 0), (0, 0, 0, 0, 0), (0, 0, 0, 0, 0)]),
}
