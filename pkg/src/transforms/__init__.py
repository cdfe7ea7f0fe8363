"""Set algebra (merge, filter, diff, invert) and exporters."""
