from typing import List, Dict
from enum import Enum, auto
import numpy as np
from bdry_ext.boundary import unitary_eigenvalues
from bdry_ext.cayley import param_to_unitary, unitary_to_param
from bdry_ext.extension import IsotropyReport, isotropy_report, wu_basis
from bdry_ext.exceptions import BdryExtError
from bdry_ext.utils import TOLERANCE, projector_distance, unitarity_defect


class CertificateStatus(Enum):
    NOT_CHECKED = auto()
    SELF_ADJOINT = auto()
    NOT_SELF_ADJOINT = auto()


class SelfAdjointnessChecker:
    """Runs the maximal isotropy test on W_U and the unitary <-> (X, L) round trip."""

    def __init__(self):
        self._reset()

    def _reset(self):
        self._status: CertificateStatus = CertificateStatus.NOT_CHECKED
        self._warning: List[str] = []
        self._error: List[str] = []
        self._report: IsotropyReport = None
        self._round_trip_defect: float = float("nan")

    @property
    def status(self) -> str:
        return self._status.name

    @property
    def is_self_adjoint(self) -> bool:
        return self._status == CertificateStatus.SELF_ADJOINT

    @property
    def warning_messages(self) -> List[str]:
        return self._warning

    @property
    def error_messages(self) -> List[str]:
        return self._error

    @property
    def report(self) -> Dict:
        """The certificate JSON: {isotropy, dim, gamma_max_defect} plus diagnostics."""
        data = self._report.to_dict() if self._report else {"isotropy": False, "dim": 0, "gamma_max_defect": float("nan")}
        data["round_trip_defect"] = self._round_trip_defect
        data["status"] = self.status
        return data

    def cli_log(self, name: str = None, verbosity: int = 0) -> List[str]:
        """Return the log lines of the CLI style.

        Args:
            name (str, optional): The label to show in the log. Defaults to None.
            verbosity (int, optional): The verbosity level from 0 to 2. Defaults to 0.

        Returns:
            List[str]: The log lines.
        """
        icon = "✅" if self.is_self_adjoint else "❌"
        name = name if name else "Anonymous extension"
        messages = [f" {icon} {name}: {self.status}"]
        if verbosity > 0 and self._report:
            messages.append(f"    dim W = {self._report.dim}, max |Gamma| on W = {self._report.gamma_max_defect:.3e}")
            messages.append(f"    ||P_W - P_W†|| = {self._report.projector_distance:.3e}")
        if verbosity > 1:
            messages.extend([f"\t{message}" for message in self._error])
            messages.extend([f"\t{message}" for message in self._warning])
        return messages

    def check(self, U, tol_one: float = TOLERANCE["one"]) -> CertificateStatus:
        """Certify T_U.

        Args:
            U (np.ndarray): The boundary unitary (hat coordinates).
            tol_one (float, optional): Eigenvalue-1 detection tolerance.

        Returns:
            CertificateStatus: SELF_ADJOINT or NOT_SELF_ADJOINT.
        """
        self._reset()
        U = np.asarray(U, dtype=np.complex128)
        try:
            self._report = isotropy_report(wu_basis(U))
        except BdryExtError as e:
            self._error.append(f"{type(e).__name__}: {e}")
            self._status = CertificateStatus.NOT_SELF_ADJOINT
            return self._status
        if not self._report.isotropy:
            self._error.append("W_U is not maximally isotropic.")
        # Check the (X, L) route reproduces U.
        try:
            param = unitary_to_param(U, tol_one)
            back = param_to_unitary(param)
            self._round_trip_defect = float(np.linalg.norm(back - U, ord=2))
            if projector_distance(param.basis, unitary_to_param(back, tol_one).basis) > 1e-8:
                self._error.append("Ran Q_U changed under the round trip through (X, L).")
        except BdryExtError as e:
            self._error.append(f"{type(e).__name__}: {e}")
        if self._round_trip_defect > 1e-8:
            self._warning.append(f"Round trip U -> (X, L) -> U moved U by {self._round_trip_defect:.3e}.")
        w = unitary_eigenvalues(U)
        near_one = np.abs(w - 1.0)
        straddling = (near_one > tol_one) & (near_one <= 1e3 * tol_one)
        if np.any(straddling):
            self._warning.append(f"{int(np.sum(straddling))} eigenvalue(s) of U lie just outside tol_one of 1.")
        if unitarity_defect(U) > 1e-13:
            self._warning.append(f"||U^† U - I|| = {unitarity_defect(U):.3e}.")
        self._status = CertificateStatus.SELF_ADJOINT if not self._error else CertificateStatus.NOT_SELF_ADJOINT
        return self._status
