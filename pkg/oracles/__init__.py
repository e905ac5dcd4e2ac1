# Oracles package initialization
