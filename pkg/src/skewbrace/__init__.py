"""Finite groups, holomorph regular subgroups and skew brace counting."""
