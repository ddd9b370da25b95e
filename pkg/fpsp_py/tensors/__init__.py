"""Dense tensor algebra.

Mode unfoldings, Khatri-Rao products and CP (CANDECOMP/PARAFAC)
factorized tensors, including the contracted product used by the
tensor-to-matrix regression.
"""
