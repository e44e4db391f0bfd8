"""Network parameters, activation and the analytic cost family."""
