"""Rule identifiers used in derivation, refutation and tableau trees."""

# display postulates (shared by every calculus)
F_RES, F_GAL, G_RES, G_GAL = "F_RES", "F_GAL", "G_RES", "G_GAL"
DISPLAY = frozenset({F_RES, F_GAL, G_RES, G_GAL})

# proof calculus
ID = "Id"
TOP_W = "⊤_W"
BOT_W = "⊥_W"
TOP_L = "⊤_L"
TOP_R = "⊤_R"
BOT_L = "⊥_L"
BOT_R = "⊥_R"
AND_L1 = "∧_L1"
AND_L2 = "∧_L2"
AND_R = "∧_R"
OR_L = "∨_L"
OR_R1 = "∨_R1"
OR_R2 = "∨_R2"
F_L = "f_L"
F_R = "f_R"
G_L = "g_L"
G_R = "g_R"
CUT = "Cut"

PROOF_RULES = frozenset(
    {ID, TOP_W, BOT_W, TOP_L, TOP_R, BOT_L, BOT_R, AND_L1, AND_L2, AND_R, OR_L, OR_R1, OR_R2, F_L, F_R, G_L, G_R}
) | DISPLAY

# refutation calculus
AX1, AX2, AX3, AX4 = "Ax1", "Ax2", "Ax3", "Ax4"
FHAT_BOTCHECK = "f̂⊥̌"
TOPHAT_GCHECK = "⊤̂ǧ"
FHAT_P = "f̂p"
P_GCHECK = "pǧ"
FHAT_GCHECK = "f̂ǧ"
G_BOTCHECK = "g⊥̌"
G_P = "gp"
P_F = "pf"
TOPHAT_F = "⊤̂f"
G_F = "gf"
F_R_NE = "f_R≠"
G_L_NE = "g_L≠"
OR_L1 = "∨_L1"
OR_L2 = "∨_L2"
AND_R1 = "∧_R1"
AND_R2 = "∧_R2"
AND_L = "∧_L"
OR_R = "∨_R"

REFUTATION_AXIOMS = frozenset({AX1, AX2, AX3, AX4})
REFUTATION_STRUCTURAL = frozenset({FHAT_BOTCHECK, TOPHAT_GCHECK, FHAT_P, P_GCHECK, FHAT_GCHECK})
REFUTATION_RULES = (
    REFUTATION_AXIOMS
    | REFUTATION_STRUCTURAL
    | frozenset(
        {G_BOTCHECK, G_P, P_F, TOPHAT_F, F_L, G_F, G_R, F_R, G_L, F_R_NE, G_L_NE}
        | {TOP_L, OR_L1, OR_L2, AND_R1, AND_R2, BOT_R, AND_L, OR_R}
    )
    | DISPLAY
)
