"""SVG renderings of worlds, missions and fields."""

import concurrent.futures
import math
import os

import matplotlib
matplotlib.use('Agg')
import matplotlib.pyplot as plt
import numpy as np

from .oriented import AtGoal

THREADS_VARIABLE = 'HARMONIC_NAV_THREADS'


def worker_count():
    """Worker threads allowed by ``HARMONIC_NAV_THREADS`` (default 1)."""
    try:
        return max(1, int(os.environ.get(THREADS_VARIABLE, '1')))
    except ValueError:
        return 1


def draw_world(ax, world, known=None):
    """Draw the boundary, the obstacles and the regions of *world*.
    Obstacles whose index is not in *known* are drawn hatched."""
    outline = world.boundary.boundary_points(512)
    ax.fill(outline[:, 0], outline[:, 1], facecolor='white', edgecolor='black', linewidth=1.5)
    for i, shape in enumerate(world.shapes):
        points = shape.boundary_points(256)
        unknown = known is not None and i not in known
        ax.fill(points[:, 0], points[:, 1], facecolor='lightgray' if unknown else 'gray',
                edgecolor='black', linewidth=0.5, hatch='//' if unknown else None)
    for region in world.regions:
        ax.add_patch(plt.Circle(region.center, region.radius, facecolor='none',
                                edgecolor='tab:blue', linestyle='--'))
        ax.annotate(region.label, region.center, ha='center', va='center', color='tab:blue')
    lower, upper = world.extent()
    margin = 0.05 * float(np.max(upper - lower))
    ax.set_xlim(lower[0] - margin, upper[0] + margin)
    ax.set_ylim(lower[1] - margin, upper[1] + margin)
    ax.set_aspect('equal')


def render_run(path, world, trajectory, events=(), known=None, title=None):
    """Write the world overlaid with the robot *trajectory* (rows with
    ``x`` and ``y``) and the reached waypoints to the SVG *path*."""
    fig, ax = plt.subplots(figsize=(6, 6))
    draw_world(ax, world, known)
    if trajectory:
        xs = [row['x'] for row in trajectory]
        ys = [row['y'] for row in trajectory]
        ax.plot(xs, ys, color='red', linewidth=1.2)
        ax.plot(xs[0], ys[0], marker='o', color='red')
    waypoints = [(e['x'], e['y']) for e in events if e.get('kind') == 'WaypointReached']
    if waypoints:
        ax.scatter(*zip(*waypoints), marker='x', color='black', s=18, zorder=3)
    detected = [e['shape'] for e in events if e.get('kind') == 'ObstacleDetected' and 'shape' in e]
    for document in detected:
        center = document['center']
        ax.plot(center[0], center[1], marker='+', color='tab:orange')
    if title:
        ax.set_title(title)
    fig.savefig(path, format='svg')
    plt.close(fig)


def grid(world, resolution):
    """``(xs, ys)`` axes of a *resolution* square grid over the world."""
    lower, upper = world.extent()
    return np.linspace(lower[0], upper[0], resolution), np.linspace(lower[1], upper[1], resolution)


def sample_values(potential, points, workers=None):
    """Navigation function values at *points*, computed by a pool of
    *workers* threads."""
    workers = worker_count() if workers is None else workers
    with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as pool:
        return np.array(list(pool.map(potential.nf_eval, points)))


def field_vector(field, q, oriented=True):
    """The oriented field at *q*, or the negated gradient if not
    *oriented*; zero where undefined."""
    try:
        if oriented:
            return field.upsilon(q)
        return -field.potential.nf_grad(q)
    except (AtGoal, ArithmeticError):
        return np.zeros(2)


def sample_vectors(field, points, oriented=True, workers=None):
    workers = worker_count() if workers is None else workers
    with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as pool:
        return np.array(list(pool.map(lambda q: field_vector(field, q, oriented), points))).reshape(-1, 2)


def render_field(path, world, xs, ys, values, arrows=None, title=None):
    """Write a heat map of *values* (shape ``(len(ys), len(xs))``) with
    optional ``(points, vectors)`` *arrows* to the SVG *path*."""
    fig, ax = plt.subplots(figsize=(6, 6))
    mesh = ax.pcolormesh(xs, ys, values, shading='auto', cmap='viridis')
    fig.colorbar(mesh, ax=ax, shrink=0.8)
    for shape in world.shapes:
        points = shape.boundary_points(256)
        ax.fill(points[:, 0], points[:, 1], facecolor='gray', edgecolor='black', linewidth=0.5)
    outline = world.boundary.boundary_points(512)
    ax.plot(outline[:, 0], outline[:, 1], color='black')
    if arrows is not None:
        points, vectors = arrows
        sizes = np.hypot(vectors[:, 0], vectors[:, 1])
        unit = np.where(sizes[:, None] > 0.0, vectors / np.where(sizes > 0.0, sizes, 1.0)[:, None], 0.0)
        ax.quiver(points[:, 0], points[:, 1], unit[:, 0], unit[:, 1], color='white',
                  angles='xy', scale=1.2 * math.sqrt(len(points)), width=0.003)
    ax.set_aspect('equal')
    if title:
        ax.set_title(title)
    fig.savefig(path, format='svg')
    plt.close(fig)
