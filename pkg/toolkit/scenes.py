"""
SVG scenes of domains, Whitney cubes, geodesics, Ω_k disks and limit-point
clouds, drawn in the fixed view [-R,R]² with the y axis pointing up.
"""
import math
from dataclasses import dataclass, field
from pathlib import Path

from django.conf import settings
from django.template.loader import render_to_string


@dataclass
class Layer:
    """Drawables of one named group, in insertion order"""

    name: str
    circles: list = field(default_factory=list)
    squares: list = field(default_factory=list)
    polylines: list = field(default_factory=list)
    points: list = field(default_factory=list)
    labels: list = field(default_factory=list)


@dataclass
class Scene:
    outer_radius: float
    layers: list = field(default_factory=list)
    precision: int = None

    def __post_init__(self):
        if self.precision is None:
            self.precision = settings.SCHOTTKY_LAB['SCENE_PRECISION']

    def number(self, value):
        value = float(value)
        if not math.isfinite(value):
            raise ValueError(f"Scene coordinate must be finite, got {value}")
        return f"{value:.{self.precision}g}"

    def _xy(self, z):
        z = complex(z)
        return self.number(z.real), self.number(-z.imag)

    def layer(self, name):
        for layer in self.layers:
            if layer.name == name:
                return layer
        layer = Layer(name)
        self.layers.append(layer)
        return layer

    def add_circle(self, name, center, radius, css='disk'):
        x, y = self._xy(center)
        self.layer(name).circles.append({'cx': x, 'cy': y, 'r': self.number(radius), 'css': css})

    def add_disks(self, name, disks, css='disk'):
        for disk in disks:
            self.add_circle(name, disk.center, disk.radius, css)

    def add_cubes(self, name, cubes):
        layer = self.layer(name)
        for cube in cubes:
            corner = cube.lower_left + 1j * cube.side
            x, y = self._xy(corner)
            layer.squares.append({'x': x, 'y': y, 'side': self.number(cube.side), 'level': cube.level})

    def add_polyline(self, name, vertices):
        points = ' '.join(','.join(self._xy(z)) for z in vertices)
        self.layer(name).polylines.append({'points': points})

    def add_points(self, name, points):
        radius = self.number(self.outer_radius / 400.0)
        layer = self.layer(name)
        for z in points:
            x, y = self._xy(z)
            layer.points.append({'cx': x, 'cy': y, 'r': radius})

    def add_label(self, name, position, text):
        x, y = self._xy(position)
        self.layer(name).labels.append({'x': x, 'y': y, 'text': text})

    @property
    def view_box(self):
        R = self.number(self.outer_radius)
        return f"-{R} -{R} {self.number(2 * self.outer_radius)} {self.number(2 * self.outer_radius)}"

    def render(self):
        return render_to_string('toolkit/scene.svg', {
            'view_box': self.view_box,
            'stroke': self.number(self.outer_radius / 500.0),
            'font_size': self.number(self.outer_radius / 25.0),
            'layers': self.layers,
        })

    def write(self, path):
        Path(path).write_text(self.render(), encoding='utf-8')


def domain_scene(config):
    """Outer circle, numbered disks and the basepoint"""
    scene = Scene(config.outer_radius)
    scene.add_circle('domain', 0j, config.outer_radius, css='outer')
    scene.add_disks('domain', config.disks)
    for j, disk in enumerate(config.disks, start=1):
        scene.add_label('labels', disk.center, str(j))
    scene.add_points('basepoint', [config.basepoint])
    return scene
