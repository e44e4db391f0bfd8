"""Event engine: updating rule, admissibility and inter-event bounds."""
