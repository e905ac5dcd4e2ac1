# Spectrum package initialization
