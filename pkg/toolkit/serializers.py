import math

from django.conf import settings
from rest_framework import serializers

from geometry.models import CircleDomainConfig, Disk
from geometry.primitives import validate_config

GENERATOR_KINDS = ('random_packing', 'sierpinski_type')


def _finite(value, name):
    if not math.isfinite(value):
        raise serializers.ValidationError(f"{name} must be finite, got {value}")
    return value


class GeneratorSerializer(serializers.Serializer):
    """Generator block of a generated spec"""
    kind = serializers.ChoiceField(choices=GENERATOR_KINDS)
    params = serializers.DictField(required=False, default=dict)
    seed = serializers.IntegerField(required=False, default=0)


class DomainSpecSerializer(serializers.Serializer):
    """
    Spec document of a circle domain: outer_radius, disks [[cx, cy, r], ...]
    and basepoint [x, y]. Geometric invariants are checked unless the context
    sets check_geometry to False.
    """
    version = serializers.IntegerField()
    outer_radius = serializers.FloatField()
    disks = serializers.ListField(
        child=serializers.ListField(child=serializers.FloatField(), min_length=3, max_length=3),
        required=False,
        default=list,
    )
    basepoint = serializers.ListField(
        child=serializers.FloatField(), min_length=2, max_length=2,
        required=False,
        default=lambda: [0.0, 0.0],
    )
    seed = serializers.IntegerField(required=False)
    generator = GeneratorSerializer(required=False)

    def validate_version(self, value):
        expected = settings.SCHOTTKY_LAB['RESULT_SCHEMA_VERSION']
        if value != expected:
            raise serializers.ValidationError(f"Unsupported spec version {value}, expected {expected}")
        return value

    def validate_outer_radius(self, value):
        _finite(value, 'outer_radius')
        if not value > 0:
            raise serializers.ValidationError(f"outer_radius must be positive, got {value}")
        return value

    def validate_disks(self, value):
        for i, (cx, cy, r) in enumerate(value, start=1):
            for name, item in (('cx', cx), ('cy', cy), ('r', r)):
                _finite(item, f"Disk {i} {name}")
            if not r > 0:
                raise serializers.ValidationError(f"Disk {i}: radius must be positive, got {r}")
        return value

    def validate_basepoint(self, value):
        for item in value:
            _finite(item, 'basepoint')
        return value

    def validate(self, data):
        """Run validate_config on the parsed configuration"""
        if self.context.get('check_geometry', True):
            violations = validate_config(config_from_data(data))
            if violations:
                raise serializers.ValidationError([v.message for v in violations])
        return data

    def create(self, validated_data):
        return config_from_data(validated_data)

    def to_representation(self, instance):
        document = {
            'version': settings.SCHOTTKY_LAB['RESULT_SCHEMA_VERSION'],
            'outer_radius': instance.outer_radius,
            'disks': [[d.center.real, d.center.imag, d.radius] for d in instance.disks],
            'basepoint': [instance.basepoint.real, instance.basepoint.imag],
        }
        if self.context.get('seed') is not None:
            document['seed'] = self.context['seed']
        if self.context.get('generator'):
            document['generator'] = self.context['generator']
        return document


def config_from_data(data):
    return CircleDomainConfig(
        outer_radius=data['outer_radius'],
        disks=[Disk(complex(cx, cy), r) for cx, cy, r in data.get('disks', [])],
        basepoint=complex(*data.get('basepoint', (0.0, 0.0))),
    )
