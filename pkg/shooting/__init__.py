# Shooting package initialization
