"""Registry of available charging controllers."""

from typing import Dict, List, Optional, Type

from ..models.charging import ControllerKind
from ..models.config import ControllerConfig
from ..utils.exceptions import InvalidConfigurationError
from .aimd import CentralizedAimdController, DistributedAimdController
from .base import ChargingController
from .local import DroopController, NoControlController


class ControllerManager:
    """Maps controller names to controller classes and builds instances."""

    def __init__(self):
        self._controllers: Dict[str, Type[ChargingController]] = {}
        self._register_default_controllers()

    def _register_default_controllers(self) -> None:
        self.register_controller(NoControlController)
        self.register_controller(DroopController)
        self.register_controller(CentralizedAimdController)
        self.register_controller(DistributedAimdController)

    def register_controller(self, controller_cls: Type[ChargingController]) -> None:
        """Register a controller class under its kind's value."""
        self._controllers[controller_cls.kind.value] = controller_cls

    def get_controller(self, name: str) -> Optional[Type[ChargingController]]:
        return self._controllers.get(_canonical(name))

    def create(self, config: ControllerConfig) -> ChargingController:
        """
        Instantiate the controller selected by ``config``.

        Raises:
            InvalidConfigurationError: If no controller of that name exists
        """
        controller_cls = self.get_controller(config.controller)
        if controller_cls is None:
            raise InvalidConfigurationError("Unknown controller",
                                            f"{config.controller!r}; available: {', '.join(self.list_controllers())}")
        return controller_cls(config)

    def list_controllers(self) -> List[str]:
        return list(self._controllers.keys())

    def is_controller_available(self, name: str) -> bool:
        return _canonical(name) in self._controllers

    def __len__(self) -> int:
        return len(self._controllers)

    def __iter__(self):
        return iter(self._controllers.values())

    def __str__(self) -> str:
        return f"ControllerManager({', '.join(self.list_controllers())})"


def _canonical(name: str) -> str:
    """Accept kind values and table labels alike (``c_aimd``, ``C-AIMD``)."""
    for kind in ControllerKind:
        if name in (kind.value, kind.label) or name.lower().replace("-", "_") == kind.value:
            return kind.value
    return name
