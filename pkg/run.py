"""
Attack Tree Checker - Flask Application Launcher
"""

import logging
import os
import sys

from dotenv import load_dotenv

# ============================================
# LOAD ENVIRONMENT VARIABLES
# ============================================
project_root = os.path.dirname(os.path.abspath(__file__))
env_path = os.path.join(project_root, '.env')
env_loaded = load_dotenv(env_path)

from services.config import CheckerConfig, configure_logging  # noqa: E402

configure_logging(CheckerConfig.log_level(default="INFO"))

logger = logging.getLogger("run")
if env_loaded:
    logger.info(f"✅ .env loaded from {env_path}")
else:
    logger.info(f"⚠️ No .env at {env_path}; using defaults")

# ============================================
# IMPORT AND CREATE FLASK APP
# ============================================
try:
    from app import create_app

    app = create_app()
except Exception as e:
    logger.error(f"❌ Failed to create Flask app: {e}", exc_info=True)
    sys.exit(1)

# ============================================
# MAIN ENTRY POINT
# ============================================
if __name__ == '__main__':
    port = int(os.getenv('PORT', '5000'))
    debug = os.getenv('FLASK_DEBUG', 'false').lower() == 'true'
    logger.info(f"🚀 {CheckerConfig.SERVICE_NAME} on http://localhost:{port}")
    try:
        app.run(host='0.0.0.0', port=port, debug=debug, use_reloader=debug)
    except KeyboardInterrupt:
        logger.info("👋 Server stopped by user")
