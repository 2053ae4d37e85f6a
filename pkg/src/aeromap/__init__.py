"""aeromap: desk-scale indoor air-quality mapping robot.

A simulated robot sweeps a simulated room; noisy sensors feed a
regression-based wall-reconstruction pipeline and a Mamdani air-quality
classifier; a telemetry service streams live state to an operator console.
"""

__version__ = "0.1.0"
