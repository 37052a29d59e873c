"""JSON schemas (draft 2020-12) for the files the CLI writes."""

_GROUP = {
    "type": "object",
    "required": ["order", "generators", "label"],
    "properties": {
        "order": {"type": "integer", "minimum": 1},
        "generators": {"type": "array", "items": {"type": "array", "items": {"type": "integer", "minimum": 0}}},
        "label": {"type": "string"},
    },
}

_NUMBERS = {"type": "array", "items": {"type": "number"}}

FREQUENCY = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["schema", "omega", "omega_field", "horizon", "burn_in", "estimator_error", "discrepancy"],
    "properties": {
        "schema": {"const": "weakchimera.frequency/1"},
        "omega": _NUMBERS,
        "omega_field": _NUMBERS,
        "horizon": {"type": "number"},
        "burn_in": {"type": "number"},
        "estimator_error": {"type": "number", "minimum": 0},
        "discrepancy": {"type": "number", "minimum": 0},
    },
}

VERDICT = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["schema", "label", "is_weak_chimera", "tol", "group", "isotropy", "theta", "setwise",
                 "frequencies", "bands", "bands_overlap", "notes"],
    "properties": {
        "schema": {"const": "weakchimera.verdict/1"},
        "label": {"type": "string"},
        "is_weak_chimera": {"type": "boolean"},
        "tol": {"type": "number", "exclusiveMinimum": 0},
        "setwise_tol": {"type": "number", "exclusiveMinimum": 0},
        "group": _GROUP,
        "isotropy": _GROUP,
        "theta": _GROUP,
        "setwise": _GROUP,
        "frequencies": FREQUENCY,
        "bands": {"type": "array", "items": {"type": "array", "items": {"type": "number"},
                                              "minItems": 2, "maxItems": 2}},
        "bands_overlap": {"type": ["boolean", "null"]},
        "notes": {"type": "array", "items": {"type": "string"}},
    },
}

EQUILIBRIUM = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["schema", "alpha", "omega_star", "residual", "eigenvalues", "stable"],
    "properties": {
        "schema": {"const": "weakchimera.equilibrium/1"},
        "alpha": _NUMBERS,
        "omega_star": {"type": "number"},
        "residual": {"type": "number", "minimum": 0},
        "eigenvalues": {"type": "array", "items": {"type": "array", "items": {"type": "number"},
                                                    "minItems": 2, "maxItems": 2}},
        "stable": {"type": "boolean"},
    },
}
