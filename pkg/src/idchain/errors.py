"""Exception hierarchy shared across the package."""


class IdChainError(Exception):
    pass


# crypto layer
class DegenerateKey(IdChainError):
    pass


class InvalidThreshold(IdChainError):
    pass


class ZeroRandomness(IdChainError):
    pass


class ScalarTooLarge(IdChainError):
    pass


class NotEnoughShares(IdChainError):
    pass


class InvalidShareProof(IdChainError):
    def __init__(self, index: int):
        super().__init__(f"decryption share from member {index} failed verification")
        self.index = index


class NotInRange(IdChainError):
    pass


class LengthMismatch(IdChainError):
    pass


class InvalidRequestProof(IdChainError):
    pass


class WitnessInconsistent(IdChainError):
    def __init__(self, clause, detail: str = ""):
        super().__init__(f"witness violates clause {clause}" + (f": {detail}" if detail else ""))
        self.clause = clause


# protocol layer
class MalformedDocs(IdChainError):
    pass


class DocsRejected(IdChainError):
    pass


class RegistrationProofInvalid(IdChainError):
    pass


class DuplicateIDcredPUB(IdChainError):
    pass


class PolicyUnsatisfied(IdChainError):
    pass


class MaxAccountsReached(IdChainError):
    pass


class CertExpired(IdChainError):
    pass


class UnknownRegId(IdChainError):
    pass


class CARecordMissing(IdChainError):
    pass


class CaNotActive(IdChainError):
    """Registration attempted with a CA that is not operating on the CAs board."""


class IssuanceFailed(IdChainError):
    """The unblinded certificate signature does not verify."""


# ledger layer
class InsufficientStake(IdChainError):
    pass


class TooFewMembers(IdChainError):
    pass


class TxRejected(IdChainError):
    """Raised inside the state machine; ``rule`` is the rejection rule identifier."""

    def __init__(self, rule: str, detail: str = ""):
        super().__init__(f"{rule}: {detail}" if detail else rule)
        self.rule = rule
        self.detail = detail


# simulator
class ScenarioParseError(IdChainError):
    def __init__(self, message: str, where: str = ""):
        super().__init__(f"{where}: {message}" if where else message)
        self.where = where


class StepFailed(IdChainError):
    def __init__(self, step: int, cause: BaseException | str):
        super().__init__(f"step {step} failed: {cause}")
        self.step = step
        self.cause = cause


class ReplayMismatch(IdChainError):
    def __init__(self, index: int | None, detail: str):
        where = "terminal hash" if index is None else f"event {index}"
        super().__init__(f"replay diverged at {where}: {detail}")
        self.index = index
        self.detail = detail
