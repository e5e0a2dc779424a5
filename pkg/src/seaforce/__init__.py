"""Series elastic actuator force sensing, observers and force control."""

__version__ = "0.1.0"
