# %% [markdown]
# # Finite constellations over a noisy channel
#
# Symbols from 2-PAM are sent through a random Gaussian channel matrix with
# additive white Gaussian noise at a given Eb/N0.  The even-numbered
# decoders search the coefficient range {0, 1}.

# %%
from spheredec import ExperimentSpec, pam_channel_instance, run_experiment

inst = pam_channel_instance(6, 2, 5.0, seed=0)
print(inst.u_true, inst.r.round(3))

# %%
for snr in (0.0, 5.0, 10.0):
    spec = ExperimentSpec(family="finite", dims=(24,), m_matrices=5, n_vectors=20,
                          levels=2, snr_db=snr, seed=1)
    rep = run_experiment(spec, workers=1)
    print("%4.1f dB  G-based %.3f  H-based %.3f" % (snr, rep.gain(24, (2, 6)), rep.gain(24, (4, 8))))

# %% [markdown]
# Noisier channels keep the search busy longer, so the savings of the new
# decoders are largest at low SNR.
