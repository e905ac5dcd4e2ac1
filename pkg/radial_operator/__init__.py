# Radial operator package initialization
