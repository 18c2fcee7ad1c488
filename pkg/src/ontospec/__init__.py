"""OntoSpec toolchain."""
