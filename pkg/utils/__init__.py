# Shared utilities package initialization
