"""Long-time asymptotics of a mixed NLS equation: scattering, phase factors, model problem, PDE check."""
