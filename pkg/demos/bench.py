"""Naive matrix fill against the fast counting paths, via the command line."""

from odometer_rqa.cli import main

main(["bench", "--alpha", "1/3", "--ell", "inf", "--eps", "a", "--k-min", "4", "--k-max", "10"])
