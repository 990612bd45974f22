"""Fitting loss-vs-tokens and metric-vs-loss lines in log space."""

import numpy as np

from vlplan.scalefit import (
    CHARTQA_VS_OCR_LOSS,
    OCR_LOSS,
    MetricFit,
    fit_loglog,
    fit_metric_vs_logloss,
    loglog_points,
    predict_loss,
    predict_metric,
)

rng = np.random.default_rng(0)
# D is measured in billions of training tokens here.
tokens = np.geomspace(1, 1000, 12)

# Noisy losses around the OCR reference line.
clean = loglog_points(*OCR_LOSS, tokens)
noisy = [(d, l * np.exp(rng.normal(0, 0.01))) for d, l in clean]
fit = fit_loglog(noisy)
print(f"fitted a={fit.a:.4f} b={fit.b:.4f} (reference {OCR_LOSS}), rms={fit.residual_rms:.4f}")
print("predicted loss at D=5000:", float(predict_loss(fit, 5000)))

# Turn predicted losses into predicted ChartQA accuracy.
chart = MetricFit(*CHARTQA_VS_OCR_LOSS)
for d in (10, 100, 1000):
    loss = float(predict_loss(fit, d))
    print(f"D={d:>4}: loss={loss:.4f} -> ChartQA ~ {float(predict_metric(chart, loss)):.4f}")

refit = fit_metric_vs_logloss([(l, float(predict_metric(chart, l))) for l in (0.2, 0.3, 0.4)])
print("refit ChartQA line:", round(refit.slope, 4), round(refit.intercept, 4))
