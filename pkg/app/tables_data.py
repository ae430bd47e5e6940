# Эталонные таблицы: весовые спектры C(SO⁺(2,2^r)) и моменты MK^h над F_{2^r}, h = 0..29.

WEIGHT_DISTRIBUTIONS = {
    4: [1, 1, 7, 31, 77, 181, 323, 403, 403, 323, 181, 77, 31, 7, 1, 1],
    5: [
        1, 1, 15, 135, 945, 5369, 23159, 81895,
        246325, 630725, 1385867, 2644947, 4410805, 6446125, 8285955, 9392163,
        9392163, 8285955, 6446125, 4410805, 2644947, 1385867, 630725, 246325,
        81895, 23159, 5369, 945, 135, 15, 1, 1,
    ],
}

POWER_MOMENTS = {
    4: [
        15,
        1,
        239,
        289,
        7631,
        22081,
        300719,
        1343329,
        13118351,
        72973441,
        604249199,
        3760049569,
        28661262671,
        188901585601,
        1380879340079,
        9373110103009,
        67076384888591,
        462209786722561,
        3272087534565359,
        22721501074479649,
        159966016268924111,
        1115184421375168321,
        7829178965854277039,
        54689811340914235489,
        383400882469952537231,
        2680945149821576426881,
        18780921149940510987119,
        131394922435183254906529,
        920122084792925568335951,
        6439066453841188580322241,
    ],
    5: [
        31,
        1,
        991,
        -959,
        63391,
        -63359,
        5102431,
        -678719,
        460435231,
        613044481,
        44833141471,
        138050637121,
        4621008512671,
        22291740481921,
        497555476630111,
        3171377872090561,
        55381758830599711,
        423220459165032961,
        6318551635327312351,
        54461730980167425601,
        733937760431358760351,
        6855945343839827241601,
        86346164924243497892191,
        851252336789971927746241,
        10249523095374924648418591,
        104764273348415132423811841,
        1224170008071148563308433631,
        12819574031043721011365916481,
        146828974390583504114568758431,
        1562774752282717527826758007681,
    ],
}

# Имя таблицы → (вид, r)
TABLES = {
    "I": ("weights", 4),
    "II": ("moments", 4),
    "III": ("weights", 5),
    "IV": ("moments", 5),
}

# Описательные имена тех же таблиц
TABLE_ALIASES = {
    "weights-16": "I",
    "moments-16": "II",
    "weights-32": "III",
    "moments-32": "IV",
}

TITLES = {
    "weights": "The weight distribution of C(SO^+(2,2^{r}))",
    "moments": "The power moments of Kloosterman sums over F_{{2^{r}}}",
}
