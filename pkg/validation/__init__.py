# Validation package initialization
