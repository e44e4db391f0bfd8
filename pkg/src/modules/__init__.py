"""Domain modules: model, dynamics, trigger, monitor, harness and cli."""
