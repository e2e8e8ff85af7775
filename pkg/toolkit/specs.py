"""
Spec files and result documents. Both are JSON, parsed with the REST framework
JSONParser and rendered with a JSONRenderer that sorts keys and indents, so
identical inputs give identical bytes.
"""
import io
import logging
import math
from pathlib import Path

import numpy as np
from django.conf import settings
from rest_framework.exceptions import ParseError
from rest_framework.parsers import JSONParser
from rest_framework.renderers import JSONRenderer

from .exceptions import SpecReadError
from .serializers import DomainSpecSerializer

logger = logging.getLogger(__name__)

INDENT = 2


def _sentinel(value):
    if math.isnan(value):
        return 'nan'
    return '+inf' if value > 0 else '-inf'


def _non_finite(value):
    return isinstance(value, (float, np.floating)) and not math.isfinite(value)


def canonical(value):
    """
    Plain JSON values with sorted keys. Complex numbers become [re, im];
    non-finite floats become null with a sibling '<key>_sentinel'.
    """
    if isinstance(value, dict):
        out = {}
        for key, item in value.items():
            key = str(key)
            out[key] = canonical(item)
            if _non_finite(item):
                out[f'{key}_sentinel'] = _sentinel(float(item))
        return {key: out[key] for key in sorted(out)}
    if isinstance(value, (list, tuple, np.ndarray)):
        return [canonical(item) for item in value]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return value if math.isfinite(value) else None
    if isinstance(value, (complex, np.complexfloating)):
        return [canonical(float(value.real)), canonical(float(value.imag))]
    return value


class DocumentRenderer(JSONRenderer):
    """JSONRenderer over canonical() values with a fixed indent and a final newline"""

    def render(self, data, accepted_media_type=None, renderer_context=None):
        rendered = super().render(canonical(data), accepted_media_type, {'indent': INDENT})
        return rendered + b'\n'


def render_document(data):
    return DocumentRenderer().render(data)


def parse_document(content):
    """bytes, str or an already parsed dict"""
    if isinstance(content, dict):
        return content
    if isinstance(content, str):
        content = content.encode('utf-8')
    try:
        data = JSONParser().parse(io.BytesIO(content))
    except ParseError as exc:
        raise SpecReadError(f"Spec is not a JSON document: {exc.detail}") from exc
    if not isinstance(data, dict):
        raise SpecReadError("Spec must be a JSON object")
    return data


def read_spec(path):
    """Raw spec document from a file"""
    try:
        content = Path(path).read_bytes()
    except OSError as exc:
        raise SpecReadError(f"Cannot read spec file {path}: {exc}") from exc
    return parse_document(content)


def spec_serializer(data, check_geometry=True):
    return DomainSpecSerializer(data=data, context={'check_geometry': check_geometry})


def parse_spec(content, check_geometry=True):
    """
    CircleDomainConfig from a spec document. Raises the REST framework
    ValidationError on invalid fields or geometry.
    """
    serializer = spec_serializer(parse_document(content), check_geometry)
    serializer.is_valid(raise_exception=True)
    return serializer.save()


def load_spec(path, check_geometry=True):
    config = parse_spec(read_spec(path), check_geometry)
    logger.info(f"Loaded spec {path}: {config.n} disks, R = {config.outer_radius:g}")
    return config


def spec_document(config, generator=None, seed=None):
    return DomainSpecSerializer(config, context={'generator': generator, 'seed': seed}).data


def dump_spec(config, path=None, generator=None, seed=None):
    """Rendered spec bytes, also written to path when given"""
    content = render_document(spec_document(config, generator, seed))
    if path is not None:
        Path(path).write_bytes(content)
    return content


def result_document(command, inputs, parameters, measurements=None, residuals=None,
                    empirical_constants=None, errors=None):
    document = {
        'version': settings.SCHOTTKY_LAB['RESULT_SCHEMA_VERSION'],
        'command': command,
        'inputs': inputs,
        'parameters': parameters,
        'measurements': measurements or {},
        'residuals': residuals or {},
        'empirical_constants': empirical_constants or {},
    }
    if errors:
        document['errors'] = errors
    return document
