"""
Logging utilities
"""
import logging

from utils.config import LOG_LEVEL

# Configure logging
logging.basicConfig(
    level=getattr(logging, LOG_LEVEL, logging.INFO),
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)

def get_logger(name):
    """Get logger instance"""
    return logging.getLogger(name)

def log_prediction(owner_id, result):
    """Log one hometown prediction"""
    logger = get_logger('prediction')
    home = result.predicted_home
    error = f"{result.error_km:.3f} km" if result.error_km is not None else "n/a"
    logger.info(
        f"Owner: {owner_id} | Home: ({home.lat_deg:.6f}, {home.lon_deg:.6f}) | "
        f"Cluster size: {result.chosen_cluster.size} | Error: {error}"
    )
