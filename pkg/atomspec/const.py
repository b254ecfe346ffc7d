DEFAULT_DEGREE_BOUND = 12
DEFAULT_M_MAX = 12
DEFAULT_DIM_BOUND = 2
DEFAULT_PRIME_SAMPLE = (2, 3, 5)

GUARD_SUBMODULES = 10**6
GUARD_HOM = 10**5
GUARD_TUPLES = 10**7
GUARD_RULES = 5000
GUARD_SPAN_PATHS = 2000
MAX_ORACLE_PRIME = 7
MAX_TOPOLOGY_SAMPLE = 12

EXIT_OK = 0
EXIT_REJECTED = 1
EXIT_RESOURCE = 2
EXIT_PARSE = 3

COMMANDS = ("check", "spectrum", "ideal", "verify", "triangular")
FORMATS = ("json", "dot", "text")
DEFAULT_FORMATS = {
    "check": "text",
    "spectrum": "json",
    "ideal": "text",
    "verify": "json",
    "triangular": "json",
}

OPEN_BASIS_NOTE = (
    "Open sets are unions over vertices of specialization-closed subsets "
    "of each copy of the prime spectrum."
)
EMBEDDING_NOTE = "Only the image of the embedding is listed; further atoms may exist."
