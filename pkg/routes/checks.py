"""
Check Routes - JSON API over the checker service
POST /api/checks, /api/export/dot, /api/sat/reduce, /api/preconditions
"""

import logging

from flask import Blueprint, Response, jsonify, request

from models.errors import ConfigurationError
from services.checker_service import checker_service

logger = logging.getLogger(__name__)

checks_bp = Blueprint('checks', __name__)


def _body() -> dict:
    data = request.get_json(silent=True)
    if not isinstance(data, dict):
        raise ConfigurationError("Request body must be a JSON object")
    return data


def _required(data: dict, key: str):
    if key not in data:
        raise ConfigurationError(f"Missing field {key!r}")
    return data[key]


def _optional_int(data: dict, key: str):
    value = data.get(key)
    if value is not None and (not isinstance(value, int) or isinstance(value, bool)):
        raise ConfigurationError(f"Field {key!r} must be an integer")
    return value


# ======================================================================
# POST /api/checks  → Run a property check
# ======================================================================
@checks_bp.route('/checks', methods=['POST'])
def run_checks():
    """
    Body: system, tree, property, scope?, node?, engine?, budget?, max_and_arity?, timings?
    """
    data = _body()
    system, tree = checker_service.load(_required(data, 'system'), _required(data, 'tree'))
    reports = checker_service.check(
        system,
        tree,
        str(_required(data, 'property')),
        scope=data.get('scope', 'global'),
        node=data.get('node'),
        engine=data.get('engine', 'exact'),
        budget=_optional_int(data, 'budget'),
        max_and_arity=_optional_int(data, 'max_and_arity'),
    )
    timings = bool(data.get('timings', False))
    holds = all(r.holds for r in reports)
    logger.info(f"{'✅' if holds else '❌'} API check finished with {len(reports)} reports")
    return jsonify({
        "success": True,
        "holds": holds,
        "reports": [r.to_dict(timings) for r in reports],
    }), 200


# ======================================================================
# POST /api/export/dot  → Graphviz text
# ======================================================================
@checks_bp.route('/export/dot', methods=['POST'])
def export_dot():
    data = _body()
    text = checker_service.export_dot(data.get('system'), data.get('tree'))
    return Response(text, mimetype='text/vnd.graphviz')


# ======================================================================
# POST /api/sat/reduce  → System and tree documents for a CNF
# ======================================================================
@checks_bp.route('/sat/reduce', methods=['POST'])
def reduce_sat():
    data = _body()
    dimacs = _required(data, 'dimacs')
    if not isinstance(dimacs, str):
        raise ConfigurationError("Field 'dimacs' must be a string")
    result = checker_service.reduce_sat(dimacs)
    return jsonify({
        "success": True,
        "system": result["system"].to_dict(),
        "tree": result["tree"].to_dict(),
        "satisfiable": result["satisfiable"],
    }), 200


# ======================================================================
# POST /api/preconditions  → States from which a postcondition is reachable
# ======================================================================
@checks_bp.route('/preconditions', methods=['POST'])
def preconditions():
    data = _body()
    post = _required(data, 'post')
    if not isinstance(post, str):
        raise ConfigurationError("Field 'post' must be a string")
    states = checker_service.infer_precondition(_required(data, 'system'), post)
    return jsonify({"success": True, "post": post, "states": states}), 200
