"""Face-relative coordinates and the two face-level moves shared by both retractions.

A simplex is viewed as a face ``W`` (``n`` points) plus an apex described by
its foot's barycentric coordinates on ``W`` and its signed height along the
canonical normal of ``W``.  Maps that "agree on the face and are isometric in
the perpendicular direction" are exactly the maps preserving this description.
"""
from __future__ import annotations

import numpy as np

from .geometry import AffineMap, canonical_normal, induced_affine_map
from .regularize import OmegaPath, omega_endpoint


def relative_coords(face, apex):
    """``(b, h)``: barycentric foot of ``apex`` on ``face`` and signed height."""
    nu = canonical_normal(face)
    h = float((apex - face[0]) @ nu)
    d = (face[1:] - face[0]).T
    coef, *_ = np.linalg.lstsq(d, apex - h * nu - face[0], rcond=None)
    return np.concatenate([[1.0 - coef.sum()], coef]), h


def place_apex(face, b, h):
    return b @ face + h * canonical_normal(face)


def signed_height(face, point):
    return float((point - face[0]) @ canonical_normal(face))


def scale_about_face(face, point, sigma):
    """Scale the component of ``point`` normal to the hyperplane of ``face`` by ``sigma``."""
    nu = canonical_normal(face)
    h = (point - face[0]) @ nu
    return point - (1.0 - sigma) * h * nu


class DampedPath:
    """``Omega`` on a simplex, with the face pulled back through the induced map at a damped time.

    At stage time ``tau`` the face is ``omega_{eta tau}^{-1}(Omega_tau(W))``
    and the apex keeps the face-relative position it has in
    ``Omega_tau(x)``, with its height multiplied by ``sigma``.  ``eta = 0``
    reproduces ``Omega`` exactly; ``eta = 1`` holds the face fixed.
    """

    def __init__(self, vertices, apex, eta):
        self.vertices = np.asarray(vertices, dtype=float)
        self.apex = apex
        self.face = [i for i in range(len(self.vertices)) if i != apex]
        self.eta = float(eta)
        self.omega = OmegaPath(self.vertices)
        self._face0 = self.vertices[self.face]
        self._nu0 = canonical_normal(self._face0)

    def induced(self, s):
        """The affine map induced by ``Omega`` at time ``s``: face to face, unit normal to unit normal."""
        if s == 0.0:
            return AffineMap.identity(self.vertices.shape[1])
        face_s = self.omega.at(s)[self.face]
        return induced_affine_map(self._face0, face_s, self._nu0, canonical_normal(face_s))

    def at(self, tau, sigma=1.0):
        x = self.omega.at(tau)
        if self.eta == 0.0 and sigma == 1.0:
            return x
        face_t = x[self.face]
        b, h = relative_coords(face_t, x[self.apex])
        pulled = self.induced(self.eta * tau).inverse()(face_t)
        out = x.copy()
        out[self.face] = pulled
        out[self.apex] = place_apex(pulled, b, sigma * h)
        return out


class FaceRegularization:
    """Regularize an (n-1)-simplex inside its hyperplane; identity on the normal line.

    The linear part is ``I + tau (L1 - I)`` about the face barycenter, where
    ``L1`` is the endpoint of ``Omega`` in dimension ``n - 1`` written in an
    orthonormal frame of the hyperplane.
    """

    def __init__(self, face):
        face = np.asarray(face, dtype=float)
        n = face.shape[1]
        self.center = face.mean(axis=0)
        d = (face[1:] - face[0]).T
        u, _, _ = np.linalg.svd(d, full_matrices=True)
        frame = u[:, : n - 1]
        coords = frame.T @ (face - self.center).T
        basis = coords[:, 1:] - coords[:, [0]]
        m1 = omega_endpoint(basis) @ np.linalg.inv(basis)
        self.linear_end = frame @ m1 @ frame.T + np.outer(u[:, -1], u[:, -1])

    def map(self, tau):
        n = len(self.center)
        lin = np.eye(n) + tau * (self.linear_end - np.eye(n))
        return AffineMap(lin, self.center - lin @ self.center)

    def at(self, points, tau):
        return self.map(tau)(points)
