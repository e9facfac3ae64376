"""
Main Routes - Health and service information
"""

from flask import Blueprint, jsonify

from services.checker_service import get_service_info
from services.config import CheckerConfig

main_bp = Blueprint('main', __name__)


# ==========================================
# HEALTH CHECK
# ==========================================
@main_bp.route('/health')
@main_bp.route('/ping')
def health_check():
    """Health check endpoint"""
    return jsonify({
        "status": "healthy",
        "service": CheckerConfig.SERVICE_NAME,
        "version": CheckerConfig.VERSION,
    }), 200


# ==========================================
# SERVICE INFO
# ==========================================
@main_bp.route('/api/info')
def service_info():
    """Engines, properties and the active configuration"""
    return jsonify(get_service_info()), 200
