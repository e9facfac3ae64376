"""
Attack Tree Checker - Flask Application Factory
"""

import logging
import os
import sys

from flask import Flask, jsonify
from flask_cors import CORS

logger = logging.getLogger(__name__)

# Blueprints live in the root-level routes/ package
project_root = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
if project_root not in sys.path:
    sys.path.insert(0, project_root)

from cli import cli  # noqa: E402
from models.errors import ArityCapExceeded, AttackTreeError, SearchBudgetExceeded  # noqa: E402
from routes.checks import checks_bp  # noqa: E402
from routes.main import main_bp  # noqa: E402
from services.config import CheckerConfig  # noqa: E402


def create_app(config=None):
    """Create and configure the Flask application.

    Args:
        config (dict, optional): Configuration dictionary to override defaults

    Returns:
        Flask: Configured Flask application instance
    """
    app = Flask(__name__)

    # ============================================
    # CONFIGURATION
    # ============================================
    app.json.sort_keys = False
    app.config['MAX_CONTENT_LENGTH'] = 4 * 1024 * 1024  # 4MB of JSON documents
    app.config['CORS_HEADERS'] = 'Content-Type'
    if config:
        app.config.update(config)

    CORS(app)

    # ============================================
    # REGISTER BLUEPRINTS AND CLI
    # ============================================
    app.register_blueprint(main_bp)
    app.register_blueprint(checks_bp, url_prefix='/api')
    app.cli.add_command(cli, name='atc')
    logger.info("✅ Blueprints registered: main, checks (/api)")

    # ============================================
    # ERROR HANDLERS
    # ============================================
    @app.errorhandler(AttackTreeError)
    def checker_error(error):
        """Input and limit errors from the checker"""
        status = 422 if isinstance(error, (ArityCapExceeded, SearchBudgetExceeded)) else 400
        logger.warning(f"⚠️ {error.kind}: {error}")
        return jsonify({
            "success": False,
            "error": error.kind,
            "message": str(error)
        }), status

    @app.errorhandler(404)
    def not_found(error):
        """Handle 404 errors"""
        return jsonify({
            "success": False,
            "error": "not_found",
            "message": str(error)
        }), 404

    @app.errorhandler(413)
    def request_entity_too_large(error):
        """Handle oversized request bodies"""
        return jsonify({
            "success": False,
            "error": "too_large",
            "message": "Maximum request size is 4MB"
        }), 413

    @app.errorhandler(500)
    def internal_error(error):
        """Handle 500 errors"""
        logger.error(f"❌ Internal error: {error}", exc_info=True)
        return jsonify({
            "success": False,
            "error": "internal_error",
            "message": "An unexpected error occurred"
        }), 500

    logger.info(f"🚀 {CheckerConfig.SERVICE_NAME} {CheckerConfig.VERSION} ready")
    return app
