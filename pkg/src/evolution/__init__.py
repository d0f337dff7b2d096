"""Time evolution along control trajectories, figures of merit and sweeps."""
