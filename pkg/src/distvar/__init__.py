"""Distinguished varieties from finite model triples."""
