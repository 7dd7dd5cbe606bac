from .enums import VertexKind, MatrixRole, GraphKind, CertificateKind

__all__ = ["VertexKind", "MatrixRole", "GraphKind", "CertificateKind"]
