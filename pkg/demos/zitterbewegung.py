"""Centroid jitter in the forward picture versus the two-boundary picture.

A mixed-energy packet's <x>(t) carries an oscillation at 2m (c = hbar = 1) on
top of its drift.  The two-boundary centroid, built from single-sign waves,
has no component at that frequency.
"""
#%% traces
from rsidirac import CiExperiment, RsiExperiment, centroid_trace_rsi, zbw_trace_ci

ci = zbw_trace_ci(CiExperiment())
rsi = centroid_trace_rsi(RsiExperiment())

#%% spectra
w, amp = ci.dominant_frequency()
print(f"forward picture: peak at w = {w:.3f} with amplitude {amp:.4f}")
print(f"  max |residual| = {ci.max_residual:.4f}")
print(f"two-boundary picture: max |residual| = {rsi.max_residual:.4f}")
print(f"  amplitude near w = 2: {rsi.band_amplitude(2.0):.4f}")
print(f"  dominant component at w = {rsi.dominant_frequency()[0]:.3f} (slow drift curvature)")

#%% a few samples
for i in range(0, ci.times.size, 40):
    print(f"t={ci.times[i]:6.2f}  <x>_fwd={ci.mean_x[i]:+.4f}  <x>_two={rsi.mean_x[i]:+.4f}")
