"""Factory for creating slow-fast model instances."""

from typing import Optional

from ...models.enums import ModelType
from ...models.params import ModelParams
from .base import SlowFastModel
from .predator_prey import PredatorPreyModel


class ModelFactory:
    """Factory for creating model instances."""

    @staticmethod
    def create_model(model_type: ModelType = ModelType.PREDATOR_PREY,
                     params: Optional[ModelParams] = None) -> SlowFastModel:
        """
        Create a model instance.

        Args:
            model_type: Implementation of the slow-fast interface
            params: Model parameters; published defaults when omitted

        Returns:
            SlowFastModel instance

        Raises:
            ValueError: If model_type is not supported
        """
        params = params or ModelParams()
        if model_type == ModelType.PREDATOR_PREY:
            return PredatorPreyModel(params)
        raise ValueError(f"Unsupported model type: {model_type}")

    @staticmethod
    def get_available_models() -> list[ModelType]:
        return list(ModelType)
