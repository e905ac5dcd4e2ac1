# Picard local solver package initialization
