"""Few-shot personalized saliency prediction for Python."""
