# Command-line package initialization
