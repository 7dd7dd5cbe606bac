from enum import Enum


class VertexKind(str, Enum):
    """Kind of a vertex of the representation digraph."""
    INPUT = "input"
    STATE = "state"


class MatrixRole(str, Enum):
    A = "A"
    B = "B"


class GraphKind(str, Enum):
    UNION = "union"
    COLORED = "colored"
    SUBSYSTEM = "subsystem"


class CertificateKind(str, Enum):
    NONACCESSIBLE = "nonaccessible"
    DILATION = "s-dilation"
    S_DISJOINT = "s-disjoint"
