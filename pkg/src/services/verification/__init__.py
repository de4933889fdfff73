"""
Verification Service Module
패밀리 검증 / 분류 서비스
"""

from services.verification.verification_service import (
    GoldenCheck,
    VerificationResult,
    VerificationService,
    get_verification_service,
)

__all__ = ["GoldenCheck", "VerificationResult", "VerificationService", "get_verification_service"]
