"""Fisher information geometry and regime analysis for Ising-type observers."""
