"""Exact planar polyline primitives shared by the field, surface and topology code.

All polylines are ``(n, 2)`` float arrays. Angles are measured around a
center point, counterclockwise positive.
"""

import math

import numpy as np
from numpy.typing import ArrayLike, NDArray

FloatArray = NDArray[np.float64]


def as_points(points: ArrayLike) -> FloatArray:
    """Convert a sequence of 2D points to an ``(n, 2)`` float array."""
    array = np.asarray(points, dtype=float)
    if array.ndim == 1:
        array = array.reshape(1, 2)
    if array.ndim != 2 or array.shape[1] != 2:
        raise ValueError(f"Expected points of shape (n, 2), got {array.shape}")
    return array


def cross2(u: FloatArray, v: FloatArray) -> FloatArray:
    """z-component of the cross product of stacked 2D vectors."""
    return u[..., 0] * v[..., 1] - u[..., 1] * v[..., 0]


def angle_between(u: FloatArray, v: FloatArray) -> FloatArray:
    """Signed angle from ``u`` to ``v`` in (-pi, pi]; zero when either is null."""
    return np.arctan2(cross2(u, v), np.sum(u * v, axis=-1))


def angle_increments(points: ArrayLike, center: ArrayLike) -> FloatArray:
    """Signed angle swept by each segment of a polyline around ``center``.

    Exact for straight segments that do not pass through the center.
    """
    rel = as_points(points) - np.asarray(center, dtype=float)
    return angle_between(rel[:-1], rel[1:])


def accumulated_angle(points: ArrayLike, center: ArrayLike) -> float:
    """Total signed angle swept by a polyline around ``center``."""
    return float(np.sum(angle_increments(points, center)))


def segment_circle_roots(
    start: FloatArray, delta: FloatArray, radius: float
) -> tuple[FloatArray, FloatArray, NDArray[np.bool_]]:
    """Parameters where segments ``start + u * delta`` meet a circle at the origin.

    Returns:
        (u_low, u_high, hit) with ``hit`` false where the line misses the circle
    """
    a = np.sum(delta * delta, axis=-1)
    b = np.sum(start * delta, axis=-1)
    c = np.sum(start * start, axis=-1) - radius * radius
    disc = b * b - a * c
    hit = (disc > 0.0) & (a > 0.0)
    safe_a = np.where(a > 0.0, a, 1.0)
    root = np.sqrt(np.where(hit, disc, 0.0))
    return (-b - root) / safe_a, (-b + root) / safe_a, hit


def unit_potential_integrals(points: ArrayLike, center: ArrayLike, radius: float) -> FloatArray:
    """Per-segment line integral of the vector potential per unit flux.

    The potential is that of an ideal solenoid of the given radius carrying
    unit flux with uniform interior field: ``1/(2 pi rho)`` azimuthal outside and
    ``rho/(2 pi radius**2)`` azimuthal inside. Outside the disk a segment
    contributes the angle it subtends over 2 pi; the part inside contributes
    its signed triangle area with the axis over pi radius**2.
    """
    rel = as_points(points) - np.asarray(center, dtype=float)
    start, end = rel[:-1], rel[1:]
    delta = end - start

    u_low, u_high, hit = segment_circle_roots(start, delta, radius)
    lo = np.clip(u_low, 0.0, 1.0)
    hi = np.clip(u_high, 0.0, 1.0)
    crosses = hit & (lo < hi)

    entry = start + lo[:, None] * delta
    exit_ = start + hi[:, None] * delta

    outside_only = angle_between(start, end) / (2.0 * math.pi)
    split = (
        angle_between(start, entry) + angle_between(exit_, end)
    ) / (2.0 * math.pi) + cross2(entry, exit_) / (2.0 * math.pi * radius * radius)
    return np.where(crosses, split, outside_only)


def unit_potential_integral(points: ArrayLike, center: ArrayLike, radius: float) -> float:
    """Line integral of the unit-flux solenoid potential along a whole polyline."""
    return float(np.sum(unit_potential_integrals(points, center, radius)))


def segment_lengths(points: ArrayLike) -> FloatArray:
    pts = as_points(points)
    return np.hypot(*np.diff(pts, axis=0).T)


def trapezoid_weights(points: ArrayLike) -> FloatArray:
    """Arc-length quadrature weight carried by each vertex (trapezoid rule)."""
    lengths = segment_lengths(points)
    weights = np.zeros(len(lengths) + 1)
    weights[:-1] += 0.5 * lengths
    weights[1:] += 0.5 * lengths
    return weights


def resample_polyline(points: ArrayLike, n_samples: int, keep_vertices: bool = False) -> FloatArray:
    """Resample a polyline at ``n_samples`` points evenly spaced in arc length.

    End points are reproduced exactly. With ``keep_vertices`` the original
    vertices are merged into the samples, so the result traces the same path.
    """
    pts = as_points(points)
    cumulative = np.concatenate([[0.0], np.cumsum(segment_lengths(pts))])
    total = cumulative[-1]
    if total == 0.0:
        return np.repeat(pts[:1], n_samples, axis=0)
    targets = np.linspace(0.0, total, n_samples)
    if keep_vertices:
        targets = np.union1d(targets, cumulative)
    resampled = np.column_stack(
        [np.interp(targets, cumulative, pts[:, 0]), np.interp(targets, cumulative, pts[:, 1])]
    )
    resampled[0] = pts[0]
    resampled[-1] = pts[-1]
    return resampled


def distance_to_polyline(points: ArrayLike, polyline: ArrayLike) -> FloatArray:
    """Shortest distance from each point to a polyline."""
    pts = as_points(points)
    line = as_points(polyline)
    if len(line) == 1:
        return np.hypot(*(pts - line[0]).T)
    start = line[:-1][None, :, :]
    delta = np.diff(line, axis=0)[None, :, :]
    rel = pts[:, None, :] - start
    length_sq = np.sum(delta * delta, axis=-1)
    u = np.where(length_sq > 0.0, np.sum(rel * delta, axis=-1) / np.where(length_sq > 0.0, length_sq, 1.0), 0.0)
    u = np.clip(u, 0.0, 1.0)
    nearest = start + u[..., None] * delta
    return np.min(np.hypot(*(pts[:, None, :] - nearest).transpose(2, 0, 1)), axis=1)


def polyline_meets_disk(polyline: ArrayLike, center: ArrayLike, radius: float) -> bool:
    """True when any part of the polyline lies within ``radius`` of ``center``."""
    return bool(np.min(distance_to_polyline(np.asarray(center, dtype=float), polyline)) <= radius)


def trim_inside_circles(
    points: ArrayLike,
    head_circle: tuple[ArrayLike, float],
    tail_circle: tuple[ArrayLike, float],
) -> FloatArray:
    """Cut off the leading part inside one circle and the trailing part inside another.

    The polyline is cut where it first leaves ``head_circle`` and where it last
    enters ``tail_circle``. Returns the original polyline when it never leaves
    the head circle.
    """
    pts = as_points(points)
    head_center, head_radius = np.asarray(head_circle[0], dtype=float), head_circle[1]
    tail_center, tail_radius = np.asarray(tail_circle[0], dtype=float), tail_circle[1]

    outside_head = np.hypot(*(pts - head_center).T) > head_radius
    outside_tail = np.hypot(*(pts - tail_center).T) > tail_radius
    if not outside_head.any() or not outside_tail.any():
        return pts

    first = int(np.argmax(outside_head))
    last = len(pts) - 1 - int(np.argmax(outside_tail[::-1]))
    if first == 0 and last == len(pts) - 1:
        return pts
    if first > last:
        return pts

    head = pts[first]
    if first > 0:
        start = pts[first - 1] - head_center
        _, u_high, _ = segment_circle_roots(start[None, :], (pts[first] - pts[first - 1])[None, :], head_radius)
        head = pts[first - 1] + float(np.clip(u_high[0], 0.0, 1.0)) * (pts[first] - pts[first - 1])

    tail = pts[last]
    if last < len(pts) - 1:
        start = pts[last] - tail_center
        u_low, _, _ = segment_circle_roots(start[None, :], (pts[last + 1] - pts[last])[None, :], tail_radius)
        tail = pts[last] + float(np.clip(u_low[0], 0.0, 1.0)) * (pts[last + 1] - pts[last])

    return np.vstack([head, pts[first : last + 1], tail])


def rotate_points(points: ArrayLike, center: ArrayLike, angle: float) -> FloatArray:
    """Rigidly rotate points by ``angle`` around ``center``."""
    pts = as_points(points)
    c = np.asarray(center, dtype=float)
    cos_a, sin_a = math.cos(angle), math.sin(angle)
    rotation = np.array([[cos_a, -sin_a], [sin_a, cos_a]])
    return (pts - c) @ rotation.T + c


def disk_quadrature(
    center: ArrayLike, radius: float, rings: int, sectors: int
) -> tuple[FloatArray, FloatArray]:
    """Polar midpoint quadrature of a disk.

    Sector angles are offset by half a sector so no node lies on the
    coordinate axes through the center; the node set is symmetric under
    reflection in both axes.

    Returns:
        (nodes, weights) with weights summing to the disk area
    """
    c = np.asarray(center, dtype=float)
    edges = radius * np.sqrt(np.arange(rings + 1) / rings)
    ring_radius = np.sqrt(0.5 * (edges[:-1] ** 2 + edges[1:] ** 2))
    angles = (np.arange(sectors) + 0.5) * 2.0 * math.pi / sectors
    rr, aa = np.meshgrid(ring_radius, angles, indexing="ij")
    nodes = np.column_stack([c[0] + (rr * np.cos(aa)).ravel(), c[1] + (rr * np.sin(aa)).ravel()])
    weights = np.full(rings * sectors, math.pi * radius * radius / (rings * sectors))
    return nodes, weights
