"""JSON schemas of the documents the command line writes."""

_number_or_inf = {"anyOf": [{"type": "number"}, {"enum": ["inf", "-inf"]}]}

HULL = {
    "type": "object",
    "required": ["origin_re", "origin_im", "cell_size", "rows", "cols", "mask_base64"],
    "properties": {
        "origin_re": {"type": "number"},
        "origin_im": {"type": "number"},
        "cell_size": {"type": "number", "exclusiveMinimum": 0},
        "rows": {"type": "integer", "minimum": 0},
        "cols": {"type": "integer", "minimum": 0},
        "mask_base64": {"type": "string"},
    },
}

SPECTRAL_REPORT = {
    "type": "object",
    "required": ["spectrum", "essential", "essential_radius", "method"],
    "properties": {
        "spectrum": {"type": "string"},
        "essential": {"type": "string"},
        "essential_radius": {"type": "number", "minimum": 0},
        "method": {"enum": ["eigensolver", "symbol-curve", "symbol-curve-plus-winding", "union",
                            "empty-by-convention"]},
        "exact": {"type": "boolean"},
    },
}

PROJECTION_REPORT = {
    "type": "object",
    "required": ["lambda", "radius", "nodes", "idempotency_residual", "commutation_residual", "rank",
                 "trace_gap"],
    "properties": {
        "lambda": {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2},
        "radius": {"type": "number", "exclusiveMinimum": 0},
        "nodes": {"type": "integer", "minimum": 16},
        "idempotency_residual": {"type": "number", "minimum": 0},
        "commutation_residual": {"type": "number", "minimum": 0},
        "rank": {"type": "integer", "minimum": 0},
        "trace_gap": {"type": "number", "minimum": 0},
        "matrix_csv": {"type": "string"},
    },
}

VERDICT = {
    "type": "object",
    "required": ["statement", "pass", "margin", "details", "inputs"],
    "properties": {
        "statement": {"enum": ["theorem1", "radius_inequality", "obs_i", "obs_ii",
                               "projection_commutation", "fact_a", "fact_c"]},
        "pass": {"type": "boolean"},
        "margin": _number_or_inf,
        "details": {"type": "object"},
        "inputs": {"type": "array", "items": {"type": "string"}},
    },
}

SUMMARY = {
    "type": "object",
    "required": ["ok", "seed", "counts", "entries"],
    "properties": {
        "ok": {"type": "boolean"},
        "seed": {"type": "integer"},
        "counts": {"type": "object"},
        "entries": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["case", "statement", "status", "margin"],
                "properties": {
                    "status": {"enum": ["pass", "fail", "not-verifiable"]},
                    "margin": _number_or_inf,
                    "seconds": {"type": "number", "minimum": 0},
                },
            },
        },
    },
}

INDUCED = {
    "type": "object",
    "required": ["restriction", "quotient", "invariance_defect"],
    "properties": {
        "restriction": {"type": "object"},
        "quotient": {"type": "object"},
        "invariance_defect": {"type": "number", "minimum": 0},
    },
}
