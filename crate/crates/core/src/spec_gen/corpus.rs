//! Fixed specification lists, transliterated to the concrete syntax.

pub(super) const LETTER_IND: &[&str] = &[
    "!(a|b) U (c & (!(d|e) U f))",
    "(F b) & (!(c|d) U (e & F f))",
    "!(c|d) U ((!e U l) & (F g))",
    "!d U ((e|k) & (!g U (h & F i)))",
    "!(e|f) U (g & F (h & (!i U j)))",
];

pub(super) const LETTER_OOD: &[&str] = &[
    "(F a) & (!(b|c) U (d & F (e & (!f U (g & F h)))))",
    "(!a U b) & (!(c|d) U (e & F (f & (!g U (h & F i)))))",
    "!b U ((c|d) & (!e U (f & F (g & (!h U (i & F l))))))",
    "!(c|d) U (e & (!f U (g & F (h & (!i U (j & F k))))))",
    "!d U ((e|f) & (!g U (h & F (i & (!j U (k & F l))))))",
];

pub(super) const LETTER_RSP: &[&str] = &[
    "(G F a) & G (a -> (F (b & F c) & (!d U e))) & G !(f|g|h|i)",
    "(G F f) & G (f -> (F (e & F d) & (!c U b))) & G !(a|g|h|i)",
    "(G F i) & G (i -> (F (h & F g) & (!b U a))) & G !(c|d|e|f)",
];

pub(super) const LETTER_REC: &[&str] = &[
    "G F a & G F b & G F c & G F d & G F e & G !(f|g|h|i|j|k)",
    "G F f & G F g & G F h & G F i & G F j & G !(a|b|c|d|e|k)",
    "G F k & G F a & G F b & G F c & G F d & G !(e|f|g|h|i|j)",
];

pub(super) const ZONE_IND: &[&str] = &[
    "!(g|y) U (m & (!g U b))",
    "(F y) & (!(y|g) U (b & F m))",
    "!(g|y) U ((!g U m) & (F b))",
    "!g U ((b|m) & (!g U (y & F b)))",
    "!(g|m) U (b & F (m & (!y U g)))",
];

pub(super) const ZONE_OOD: &[&str] = &[
    "(F y) & (!(y|g) U (b & F (m & (!y U (g & F b)))))",
    "(!g U b) & (!(b|y) U (m & F (g & (!y U (b & F m)))))",
    "!g U ((b|m) & (!g U (y & F (b & (!y U (m & F b))))))",
    "!(y|m) U (b & (!y U (g & F (m & (!g U (y & F b))))))",
    "!m U ((y|g) & (!m U (b & F (m & (!b U (g & F y))))))",
];

pub(super) const ZONE_RSP: &[&str] = &[
    "(G F b) & G (b -> F g) & G !(y|m)",
    "(G F g) & G (g -> F y) & G !(b|m)",
    "(G F m) & G (m -> F y) & G !(g|b)",
];

pub(super) const ZONE_REC: &[&str] = &[
    "G F b & G F g & G !(y|m)",
    "G F g & G F y & G !(b|m)",
    "G F m & G F y & G !(g|b)",
];

pub(super) const ZONE_PER: &[&str] = &[
    "F G y & G !(g|b|m)",
    "F G g & G !(y|b|m)",
    "F G b & G !(y|g|m)",
];

pub(super) const ARM_FULL_IND: &[&str] = &[
    "!(a_g|a_y) U (g_m & (!a_g U g_b))",
    "(F g_y) & (!(a_y|a_g) U (g_b & F g_m))",
    "!(a_g|a_y) U ((!a_g U g_m) & (F g_b))",
    "!a_g U ((g_b|g_m) & (!a_g U (g_y & F g_b)))",
    "!(a_y|a_m) U (g_b & F (g_m & (!a_y U g_g)))",
];

pub(super) const ARM_FULL_OOD: &[&str] = &[
    "(F g_y) & (!(a_y|a_g) U (g_b & F (g_m & (!a_y U (g_g & F g_b)))))",
    "(!a_g U g_b) & (!(a_b|a_y) U (g_m & F (g_g & (!a_y U (g_b & F g_m)))))",
    "!a_g U ((g_b|g_m) & (!a_g U (g_y & F (g_b & (!a_y U (g_m & F g_b))))))",
    "!(a_y|a_m) U (g_b & (!a_y U (g_g & F (g_m & (!a_g U (g_y & F g_b))))))",
    "!a_m U ((g_y|g_g) & (!a_m U (g_b & F (g_m & (!a_b U (g_g & F g_y))))))",
];

pub(super) const MULTI_INDEP: &[&str] = &[
    "(!(m_0|y_0) U (b_0 & F g_0)) & (!(b_1|g_1) U (m_1 & F y_1))",
    "(F b_0) & (!b_0 U (g_0 & F y_0)) & (F g_1) & (!g_1 U (m_1 & F b_1))",
    "(!g_0 U ((b_0|m_0) & (!g_0 U y_0))) & (!b_1 U ((g_1|y_1) & (!b_1 U m_1)))",
];

pub(super) const MULTI_COOP: &[&str] = &[
    "!(m_0|m_1) U ((b_0 & b_1) & !(y_0|y_1) U (g_0 & g_1))",
    "F ((b_0 & b_1) & (!(m_0|m_1) U ((y_0 & y_1) & F (g_0 & g_1))))",
    "F ((b_0 & b_1) & F ((y_0 & y_1) & !(m_0|m_1) U (g_0 & g_1)))",
];

pub(super) const MULTI_MIX: &[&str] = &[
    "(!m_0 U y_0) & (!b_1 U m_1) & F ((b_0 & g_1) & F (g_0 & m_1))",
    "(!y_0 U (b_0 & F g_0)) & (!b_1 U g_1) & (!(y_0|y_1) U (b_0 & b_1))",
    "!m_0 U (b_0 & F (m_1 & F (b_0 & b_1))) & !y_1 U (g_1 & F (y_0 & F (b_0 & b_1)))",
];

pub(super) const MULTI_RSP: &[&str] = &[
    "(G F b_0) & (G F g_1) & G (b_0 -> F y_1) & G (g_1 -> F m_0) & G !(y_0|b_1)",
    "(G F g_0) & (G F m_1) & G (g_0 -> F y_1) & G (m_1 -> F b_0) & G !(b_1|m_0)",
    "(G F m_0) & (G F y_1) & G (m_0 -> F g_1) & G (y_1 -> g_0) & G !(m_1|b_0)",
];

pub(super) const MULTI_REC: &[&str] = &[
    "G F (b_0 & g_1) & G F (g_0 & y_1) & G !(y_0|m_1)",
    "G F (g_0 & y_1) & G F (y_0 & b_1) & G !(b_0|m_1)",
    "G F (m_0 & b_1) & G F (b_0 & y_1) & G !(g_0|g_1)",
];

pub(super) const MULTI_PER: &[&str] = &[
    "F G (y_0 & m_1) & G !(g_0|b_0|y_1|b_1)",
    "F G (g_0 & b_1) & G !(y_0|b_0|m_1|y_1)",
    "F G (b_0 & y_1) & G !(y_0|g_0|m_1|b_1)",
];

/// Letter complexity grid, keyed by (n_seq, n_disj).
pub(super) const LETTER_REACH_ONLY: &[((usize, usize), &[&str])] = &[
    ((2, 0), &["F (a & F l)", "F (d & F g)", "F (f & F k)"]),
    ((4, 0), &["F (a & F (b & F (c & F d)))", "F (e & F (f & F (g & F h)))", "F (i & F (j & F (k & F l)))"]),
    ((2, 1), &["F ((a|b) & F (k|l))", "F ((c|d) & F (g|h))", "F ((e|f) & F (i|j))"]),
    (
        (4, 1),
        &[
            "F ((a|b) & F ((c|d) & F ((e|f) & F (g|h))))",
            "F ((e|f) & F ((g|h) & F ((i|j) & F (k|l))))",
            "F ((i|j) & F ((k|l) & F ((a|b) & F (c|d))))",
        ],
    ),
];

pub(super) const LETTER_REACH_AVOID: &[((usize, usize), &[&str])] = &[
    ((2, 0), &["!a U (b & (!c U d))", "!e U (f & (!g U h))", "!i U (j & (!k U l))"]),
    (
        (4, 0),
        &[
            "!a U (b & (!c U (d & (!e U (f & (!g U h))))))",
            "!e U (f & (!g U (h & (!i U (j & (!k U l))))))",
            "!i U (j & (!k U (l & (!a U (b & (!c U d))))))",
        ],
    ),
    ((2, 1), &["!(a|b) U (c & (!(d|e) U f))", "!(e|f) U (g & (!(h|i) U j))", "!(i|j) U (k & (!(l|a) U b))"]),
    (
        (4, 1),
        &[
            "!(a|b) U (c & (!(d|e) U (f & (!(g|h) U (i & (!(j|k) U l))))))",
            "!(e|f) U (g & (!(h|i) U (j & (!(k|l) U (a & (!(b|c) U d))))))",
            "!(i|j) U (k & (!(l|a) U (b & (!(c|d) U (e & (!(f|g) U h))))))",
        ],
    ),
];
